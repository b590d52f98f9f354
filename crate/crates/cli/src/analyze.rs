use conekit::arrangement::{PointClass, WeightedArrangement};
use conekit::invariants::invariant_report;
use conekit::pk_cone::{cone_at_point, decay_rate_mu};
use conekit::scalar::format_rational;
use conekit::{Error, Result};
use serde_json::{json, Value};

use crate::output::{self, Format};
use crate::Outcome;

#[derive(clap::Args)]
pub struct Args {
    /// Arrangement JSON (`-` for stdin)
    #[arg(long)]
    input: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

fn class_name(class: PointClass) -> &'static str {
    match class {
        PointClass::Stable => "stable",
        PointClass::Jumped => "jumped",
        PointClass::NonKlt => "non-klt",
    }
}

struct PointRow {
    coords: [String; 3],
    incident: Vec<usize>,
    class: PointClass,
    klt: bool,
    troyanov: bool,
    spherical_liftable: bool,
    cone: Option<Value>,
    density: Option<(String, f64)>,
    mu_max: Option<String>,
}

pub fn run(args: Args) -> Result<Outcome> {
    let arr = WeightedArrangement::from_json(&output::read_input(&args.input)?)?;
    let regime = arr.regime_report();
    let mut rows = Vec::with_capacity(regime.points.len());
    for p in &regime.points {
        let cone = cone_at_point(&p.point, &arr).ok();
        let mu_max = cone
            .as_ref()
            .and_then(|c| decay_rate_mu(c).ok())
            .map(|d| output::exact_or_float(&d.mu_max));
        rows.push(PointRow {
            coords: p.point.location.coord_strings(),
            incident: p.point.incident.clone(),
            class: p.class,
            klt: p.klt,
            troyanov: p.troyanov,
            spherical_liftable: p.spherical_liftable,
            density: cone.as_ref().map(|c| (output::exact_or_float(c.density()), c.density().to_f64())),
            cone: cone.map(|c| serde_json::to_value(c).expect("cone serializes")),
            mu_max,
        });
    }
    let (invariants, error) = match invariant_report(&arr) {
        Ok(report) => (Some(report), None),
        Err(e @ (Error::NotStable { .. } | Error::NonKlt(_))) => (None, Some(e)),
        Err(e) => return Err(e),
    };
    let text = match args.format {
        Format::Json => {
            let points: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "location": r.coords,
                        "lines": r.incident,
                        "multiplicity": r.incident.len(),
                        "class": class_name(r.class),
                        "klt": r.klt,
                        "troyanov": r.troyanov,
                        "spherical_liftable": r.spherical_liftable,
                        "cone": r.cone,
                        "mu_max": r.mu_max,
                    })
                })
                .collect();
            let doc = json!({
                "lines": arr.len(),
                "total_weight": format_rational(&regime.total_weight),
                "global_regime": regime.global,
                "points": points,
                "invariants": invariants,
                "error": error.as_ref().map(output::error_json),
            });
            output::json(&doc)
        }
        Format::Csv => {
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let (exact, float) = r
                        .density
                        .clone()
                        .map(|(e, f)| (e, output::num(f)))
                        .unwrap_or_default();
                    vec![
                        r.coords[0].clone(),
                        r.coords[1].clone(),
                        r.coords[2].clone(),
                        r.incident.len().to_string(),
                        r.incident.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" "),
                        class_name(r.class).to_string(),
                        exact,
                        float,
                        r.mu_max.clone().unwrap_or_default(),
                    ]
                })
                .collect();
            let mut text = output::csv(
                &["x", "y", "z", "multiplicity", "lines", "class", "density", "density_float", "mu_max"],
                &table,
            );
            if let Some(inv) = &invariants {
                let mut summary = vec![
                    vec!["log_c2".into(), inv.log_c2.exact.clone(), output::num(inv.log_c2.float)],
                    vec!["c1_squared".into(), inv.c1_squared.exact.clone(), output::num(inv.c1_squared.float)],
                    vec!["bmy_defect".into(), inv.bmy_defect.exact.clone(), output::num(inv.bmy_defect.float)],
                    vec!["weighted_euler".into(), inv.weighted_euler.exact.clone(), output::num(inv.weighted_euler.float)],
                ];
                if let Some(e) = &inv.energy {
                    summary.insert(0, vec!["energy".into(), e.exact.clone(), output::num(e.float)]);
                }
                text.push('\n');
                text.push_str(&output::csv(&["invariant", "exact", "float"], &summary));
            }
            text
        }
    };
    Ok(Outcome { text, error })
}
