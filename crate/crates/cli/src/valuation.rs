use conekit::scalar::rat;
use conekit::valuations::{
    analyze_germ, beta_star, density_irreducible, lct_irreducible, GermSpec, TangentConeResult, TangentRegime,
};
use conekit::{Error, Result, Scalar};

use crate::output::{self, Format};
use crate::Outcome;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Kind {
    Irreducible,
    Ordinary,
    TangentPair,
    Ak,
}

#[derive(clap::Args)]
pub struct Args {
    /// Germ JSON instead of flags (`-` for stdin)
    #[arg(long, conflicts_with = "kind")]
    input: Option<String>,
    #[arg(long, value_enum)]
    kind: Option<Kind>,
    #[arg(long)]
    d: Option<u64>,
    #[arg(long)]
    e: Option<u64>,
    /// Cone-angle parameter, e.g. `1/2`
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Comma-separated weights of the branches
    #[arg(long)]
    betas: Option<String>,
    #[arg(long)]
    k: Option<u64>,
    /// Emit a CSV of nu(beta) at this many weights across the klt range
    #[arg(long)]
    sweep: Option<u64>,
    /// Tolerance of the valuation minimization
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

fn germ_from_flags(args: &Args) -> Result<GermSpec> {
    let kind = output::require(args.kind, "kind")?;
    let beta = || output::scalar(output::require(args.beta.as_deref(), "beta")?);
    Ok(match kind {
        Kind::Irreducible => GermSpec::Irreducible {
            d: output::require(args.d, "d")?,
            e: output::require(args.e, "e")?,
            beta: beta()?,
        },
        Kind::Ordinary => GermSpec::Ordinary { betas: output::scalar_list(output::require(args.betas.as_deref(), "betas")?)? },
        Kind::TangentPair => {
            let list = output::scalar_list(output::require(args.betas.as_deref(), "betas")?)?;
            let [b1, b2]: [Scalar; 2] = list
                .try_into()
                .map_err(|_| Error::InvalidInput("a tangent pair takes two weights".into()))?;
            GermSpec::TangentPair { betas: (b1, b2) }
        }
        Kind::Ak => GermSpec::Ak { k: output::require(args.k, "k")?, beta: beta()? },
    })
}

fn regime_name(r: TangentRegime) -> &'static str {
    match r {
        TangentRegime::QuasiRegularCone => "quasi-regular-cone",
        TangentRegime::ProductJump => "product-jump",
        TangentRegime::Collapsed => "collapsed",
        TangentRegime::NonKlt => "non-klt",
    }
}

/// `n` exact weights strictly inside `(1 - lct, 1)`.
fn sweep(d: u64, e: u64, n: u64) -> Result<Outcome> {
    if n == 0 {
        return Err(Error::InvalidInput("--sweep needs at least one sample".into()));
    }
    let lo = rat(1, 1) - lct_irreducible(d, e)?;
    let star = Scalar::Exact(beta_star(d, e)?);
    let width = rat(1, 1) - &lo;
    let rows = (1..=n)
        .map(|i| {
            let beta = Scalar::Exact(&lo + &width * rat(i as i64, n as i64 + 1));
            let r: TangentConeResult = density_irreducible(d, e, &beta)?;
            Ok(vec![
                output::exact_or_float(&beta),
                output::num(beta.to_f64()),
                output::exact_or_float(&r.density),
                output::num(r.density.to_f64()),
                regime_name(r.regime).to_string(),
                output::exact_or_float(&star),
                r.conjectural.to_string(),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome::ok(output::csv(
        &["beta", "beta_float", "nu", "nu_float", "regime", "jump_threshold", "conjectural"],
        &rows,
    )))
}

pub fn run(args: Args) -> Result<Outcome> {
    let germ = match &args.input {
        Some(path) => GermSpec::from_json(&output::read_input(path)?)?,
        None => germ_from_flags(&args)?,
    };
    if let Some(n) = args.sweep {
        return match germ {
            GermSpec::Irreducible { d, e, .. } => sweep(d, e, n),
            GermSpec::Ak { k, .. } if k % 2 == 0 && k > 0 => sweep(2, k + 1, n),
            _ => Err(Error::InvalidInput("--sweep applies to irreducible and A_k (k even) germs".into())),
        };
    }
    let report = analyze_germ(&germ, args.tol)?;
    let text = match args.format {
        Format::Json => output::json(&report),
        Format::Csv => {
            let mut rows = Vec::new();
            if let Some(tc) = &report.tangent_cone {
                rows.push(vec!["density".into(), output::exact_or_float(&tc.density), output::num(tc.density.to_f64())]);
                rows.push(vec!["regime".into(), regime_name(tc.regime).into(), String::new()]);
                rows.push(vec!["conjectural".into(), tc.conjectural.to_string(), String::new()]);
            }
            if let Some(b) = &report.jump_threshold {
                rows.push(vec!["jump_threshold".into(), output::exact_or_float(b), output::num(b.to_f64())]);
            }
            if let Some(m) = &report.valuation_minimum {
                rows.push(vec!["valuation_minimum".into(), String::new(), output::num(m.min_value)]);
                rows.push(vec!["minimizer_ray".into(), String::new(), output::num(m.minimizer_ray)]);
            }
            if let Some((lo, hi)) = &report.stable_range {
                rows.push(vec!["stable_range_low".into(), output::exact_or_float(lo), output::num(lo.to_f64())]);
                rows.push(vec!["stable_range_high".into(), output::exact_or_float(hi), output::num(hi.to_f64())]);
            }
            output::csv(&["quantity", "exact", "float"], &rows)
        }
    };
    Ok(Outcome::ok(text))
}
