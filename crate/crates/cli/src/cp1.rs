use conekit::cp1::{area, classify_regime, period, sc_polygon, sweep, PeriodPath, PointConfig};
use conekit::{Error, Result};
use num_complex::Complex64;
use serde_json::json;

use crate::output::{self, Format};
use crate::Outcome;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Op {
    Regime,
    Area,
    Period,
    Polygon,
    Sweep,
}

#[derive(clap::Args)]
pub struct Args {
    /// Configuration JSON (`-` for stdin)
    #[arg(long)]
    input: String,
    #[arg(long, value_enum)]
    op: Op,
    /// Relative quadrature tolerance
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Start point index of a period (all consecutive pairs when omitted)
    #[arg(long)]
    from: Option<usize>,
    /// End point index of a period
    #[arg(long)]
    to: Option<usize>,
    /// Point moved by a sweep
    #[arg(long)]
    index: Option<usize>,
    /// Sweep start, `re,im`
    #[arg(long, allow_hyphen_values = true)]
    start: Option<String>,
    /// Sweep end, `re,im`
    #[arg(long, allow_hyphen_values = true)]
    end: Option<String>,
    #[arg(long, default_value_t = 10)]
    steps: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn run(args: Args) -> Result<Outcome> {
    let cfg = PointConfig::from_json(&output::read_input(&args.input)?)?;
    let text = match args.op {
        Op::Regime => output::json(&classify_regime(&cfg)?),
        Op::Area => {
            let a = area(&cfg, args.tol)?;
            match args.format {
                Format::Json => output::json(&json!({ "area": a.value, "error_estimate": a.error, "tol": args.tol })),
                Format::Csv => output::csv(
                    &["area", "error_estimate", "tol"],
                    &[vec![output::num(a.value), output::num(a.error), output::num(args.tol)]],
                ),
            }
        }
        Op::Period => {
            let paths: Vec<(usize, usize)> = match (args.from, args.to) {
                (Some(i), Some(j)) => vec![(i, j)],
                (None, None) => (0..cfg.len().saturating_sub(1)).map(|i| (i, i + 1)).collect(),
                _ => return Err(Error::InvalidInput("give both --from and --to, or neither".into())),
            };
            let mut rows = Vec::with_capacity(paths.len());
            for (i, j) in paths {
                let path = PeriodPath::new(&cfg, i, j)?;
                let p = period(&cfg, &path, args.tol)?;
                rows.push((path, p));
            }
            match args.format {
                Format::Json => {
                    let doc: Vec<_> = rows
                        .iter()
                        .map(|(path, p)| {
                            json!({
                                "from": path.from,
                                "to": path.to,
                                "clearance": path.clearance,
                                "period": pair(p.value),
                                "length": p.value.norm(),
                                "error_estimate": p.error,
                            })
                        })
                        .collect();
                    output::json(&doc)
                }
                Format::Csv => output::csv(
                    &["from", "to", "re", "im", "length", "error_estimate"],
                    &rows
                        .iter()
                        .map(|(path, p)| {
                            vec![
                                path.from.to_string(),
                                path.to.to_string(),
                                output::num(p.value.re),
                                output::num(p.value.im),
                                output::num(p.value.norm()),
                                output::num(p.error),
                            ]
                        })
                        .collect::<Vec<_>>(),
                ),
            }
        }
        Op::Polygon => {
            let poly = sc_polygon(&cfg, args.tol)?;
            match args.format {
                Format::Json => output::json(&json!({
                    "vertices": poly.vertices.iter().map(|&z| pair(z)).collect::<Vec<_>>(),
                    "angles": poly.angles,
                    "side_error_estimates": poly.side_errors,
                    "closure_defect": poly.closure_defect,
                    "shoelace_area": poly.shoelace_area,
                })),
                Format::Csv => output::csv(
                    &["vertex", "re", "im", "angle"],
                    &poly
                        .vertices
                        .iter()
                        .zip(&poly.angles)
                        .enumerate()
                        .map(|(i, (z, a))| vec![i.to_string(), output::num(z.re), output::num(z.im), output::num(*a)])
                        .collect::<Vec<_>>(),
                ),
            }
        }
        Op::Sweep => {
            let index = output::require(args.index, "index")?;
            let start = output::complex(output::require(args.start.as_deref(), "start")?)?;
            let end = output::complex(output::require(args.end.as_deref(), "end")?)?;
            let rows = sweep(&cfg, index, start, end, args.steps, args.tol)?;
            match args.format {
                Format::Json => output::json(&rows),
                Format::Csv => {
                    let sides = cfg.len() - 1;
                    let mut header: Vec<String> =
                        ["step", "re", "im", "area", "area_error"].iter().map(|s| s.to_string()).collect();
                    header.extend((0..sides).map(|j| format!("side_{j}_{}", j + 1)));
                    let header: Vec<&str> = header.iter().map(String::as_str).collect();
                    let table: Vec<Vec<String>> = rows
                        .iter()
                        .map(|r| {
                            let mut row = vec![
                                r.step.to_string(),
                                output::num(r.point.re),
                                output::num(r.point.im),
                                r.area.map(|a| output::num(a.value)).unwrap_or_default(),
                                r.area.map(|a| output::num(a.error)).unwrap_or_default(),
                            ];
                            row.extend(r.side_lengths.iter().map(|s| s.map(output::num).unwrap_or_default()));
                            row
                        })
                        .collect();
                    output::csv(&header, &table)
                }
            }
        }
    };
    Ok(Outcome::ok(text))
}
