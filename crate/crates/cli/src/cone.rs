use conekit::cone_lab::{
    greens_exponents, indicial_roots, lambda_of_delta, mode_solution_2d, radial_solve, scaling_identity_check,
    ConeOperator, ModeProblem,
};
use conekit::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::output::{self, Format};
use crate::Outcome;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Op {
    Indicial,
    Lambda,
    Mode,
    Radial,
    Greens,
    Scaling,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Operator {
    Radial4d,
    Cone2d,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum TestFunction {
    /// `r^2`
    R2,
    /// A seeded combination of `r^p cos(m theta)` and `r^q sin(m theta)`
    Random,
}

#[derive(clap::Args)]
pub struct Args {
    #[arg(long, value_enum)]
    op: Op,
    /// Link eigenvalue
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Homogeneity degree
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    /// Fourier index
    #[arg(long)]
    k: Option<u64>,
    /// Exponent of the source `rho^s cos(k theta)`
    #[arg(long, allow_hyphen_values = true)]
    s: Option<String>,
    #[arg(long, default_value_t = 0.5)]
    r0: f64,
    #[arg(long, default_value_t = 2.0)]
    r1: f64,
    #[arg(long, allow_hyphen_values = true)]
    u0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    u1: Option<f64>,
    /// Source `c r^p` of the radial equation: coefficient
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    source_coeff: f64,
    /// Source `c r^p` of the radial equation: exponent
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    source_exp: f64,
    /// Radial intervals
    #[arg(long, default_value_t = 2000)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    j_max: u64,
    #[arg(long, default_value_t = 2)]
    k_max: u64,
    #[arg(long, value_enum, default_value_t = Operator::Radial4d)]
    operator: Operator,
    #[arg(long, value_enum, default_value_t = TestFunction::R2)]
    function: TestFunction,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Dilation factor of the scaling check
    #[arg(long, default_value_t = 2.0)]
    scale: f64,
    #[arg(long, default_value_t = 400)]
    n_r: usize,
    #[arg(long, default_value_t = 64)]
    n_theta: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

struct Term {
    coeff: f64,
    power: f64,
    m: f64,
    sine: bool,
}

fn random_function(seed: u64) -> Vec<Term> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..6)
        .map(|i| Term {
            coeff: rng.gen_range(-1.0..1.0),
            power: rng.gen_range(0.5..3.0),
            m: (i / 2) as f64,
            sine: i % 2 == 1,
        })
        .collect()
}

pub fn run(args: Args) -> Result<Outcome> {
    let text = match args.op {
        Op::Indicial => {
            let lambda = output::scalar(output::require(args.lambda.as_deref(), "lambda")?)?;
            output::json(&indicial_roots(&lambda)?)
        }
        Op::Lambda => {
            let delta = output::scalar(output::require(args.delta.as_deref(), "delta")?)?;
            output::json(&lambda_of_delta(&delta))
        }
        Op::Mode => {
            let problem = ModeProblem {
                beta: output::scalar(output::require(args.beta.as_deref(), "beta")?)?,
                k: output::require(args.k, "k")?,
                s: output::scalar(output::require(args.s.as_deref(), "s")?)?,
            };
            output::json(&json!({ "problem": problem, "solution": mode_solution_2d(&problem)? }))
        }
        Op::Radial => {
            let lambda = output::scalar(output::require(args.lambda.as_deref(), "lambda")?)?.to_f64();
            let (c, p) = (args.source_coeff, args.source_exp);
            let profile = radial_solve(
                lambda,
                args.r0,
                args.r1,
                output::require(args.u0, "u0")?,
                output::require(args.u1, "u1")?,
                |r| c * r.powf(p),
                args.n,
            )?;
            match args.format {
                Format::Json => output::json(&profile),
                Format::Csv => output::csv(
                    &["r", "u"],
                    &profile.r.iter().zip(&profile.u).map(|(r, u)| vec![output::num(*r), output::num(*u)]).collect::<Vec<_>>(),
                ),
            }
        }
        Op::Greens => {
            let beta = output::scalar(output::require(args.beta.as_deref(), "beta")?)?;
            let table = greens_exponents(&beta, args.j_max, args.k_max)?;
            match args.format {
                Format::Json => output::json(&table),
                Format::Csv => output::csv(
                    &["exponent", "exponent_float", "j", "k"],
                    &table
                        .iter()
                        .map(|g| {
                            vec![
                                output::exact_or_float(&g.exponent),
                                output::num(g.exponent.to_f64()),
                                g.j.to_string(),
                                g.k.to_string(),
                            ]
                        })
                        .collect::<Vec<_>>(),
                ),
            }
        }
        Op::Scaling => {
            let op = match args.operator {
                Operator::Radial4d => ConeOperator::Radial4d,
                Operator::Cone2d => ConeOperator::Cone2d {
                    beta: output::scalar(output::require(args.beta.as_deref(), "beta")?)?.to_f64(),
                },
            };
            let terms = random_function(args.seed);
            let random = args.function == TestFunction::Random;
            let u = |r: f64, theta: f64| {
                if !random {
                    return r * r;
                }
                terms
                    .iter()
                    .map(|t| {
                        let angular = if t.sine { (t.m * theta).sin() } else { (t.m * theta).cos() };
                        t.coeff * r.powf(t.power) * angular
                    })
                    .sum()
            };
            let check = scaling_identity_check(op, u, args.r0, args.r1, args.n_r, args.n_theta, args.scale)?;
            output::json(&json!({ "operator": op, "seed": args.seed, "check": check }))
        }
    };
    if text.is_empty() {
        return Err(Error::InvalidInput("empty output".into()));
    }
    Ok(Outcome::ok(text))
}
