//! Global invariants of a weighted arrangement: energy, logarithmic second
//! Chern class, `c_1^2`, the Bogomolov-Miyaoka-Yau defect and the weighted
//! Euler characteristic.
//!
//! Everything is exact rational arithmetic. The energy of the Ricci-flat
//! metric is
//!
//! ```text
//! E = 3 + sum_j (beta_j - 1) chi(L_j^x) + sum_i (nu_i - 1)
//! ```
//!
//! where `L_j^x` is the line with its multiple points removed and `nu_i` is
//! the volume density of the model cone at the i-th multiple point. The same
//! expression is the logarithmic `c_2(X, D)` for any klt pair with stable
//! points; the energy label only applies in the Calabi-Yau case.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arrangement::{MultiplePoint, WeightedArrangement};
use crate::error::{Error, Result};
use crate::pk_cone::{cone_at_point, exact_density, PkCone};
use crate::scalar::{format_rational, rational_to_f64};

fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Euler characteristic of line `j` minus the multiple points on it.
pub fn chi_open_line(j: usize, points: &[MultiplePoint]) -> i64 {
    2 - points.iter().filter(|p| p.incident.contains(&j)).count() as i64
}

/// Model cones at every multiple point, failing on the first unstable one.
pub fn point_cones(arr: &WeightedArrangement, points: &[MultiplePoint]) -> Result<Vec<PkCone>> {
    points.iter().map(|p| cone_at_point(p, arr)).collect()
}

fn densities(arr: &WeightedArrangement, points: &[MultiplePoint]) -> Result<Vec<BigRational>> {
    Ok(point_cones(arr, points)?.iter().map(exact_density).collect())
}

fn log_c2_from(arr: &WeightedArrangement, points: &[MultiplePoint], nu: &[BigRational]) -> BigRational {
    let line_term = arr
        .betas()
        .iter()
        .enumerate()
        .map(|(j, b)| (b - BigRational::one()) * int(chi_open_line(j, points)))
        .fold(BigRational::zero(), |a, x| a + x);
    let point_term = nu.iter().map(|v| v - BigRational::one()).fold(BigRational::zero(), |a, x| a + x);
    int(3) + line_term + point_term
}

/// `3 + sum_j (beta_j - 1) chi(L_j^x) + sum_i (nu_i - 1)`.
pub fn log_c2(arr: &WeightedArrangement) -> Result<BigRational> {
    let points = arr.multiple_points();
    let nu = densities(arr, &points)?;
    Ok(log_c2_from(arr, &points, &nu))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Energy {
    pub value: BigRational,
    /// When false the value is the logarithmic `c_2`, not an energy.
    pub calabi_yau: bool,
}

pub fn energy(arr: &WeightedArrangement) -> Result<Energy> {
    Ok(Energy { value: log_c2(arr)?, calabi_yau: arr.is_calabi_yau() })
}

fn require_generic(points: &[MultiplePoint]) -> Result<()> {
    match points.iter().map(MultiplePoint::multiplicity).max() {
        Some(d) if d > 2 => Err(Error::NotGeneric { multiplicity: d }),
        _ => Ok(()),
    }
}

/// `3/2 - (1/2) sum_j (1 - beta_j)^2`, valid for generic Calabi-Yau arrangements.
pub fn energy_generic_closed_form(arr: &WeightedArrangement) -> Result<BigRational> {
    require_generic(&arr.multiple_points())?;
    if !arr.is_calabi_yau() {
        return Err(Error::NotCalabiYau { sum: format_rational(&arr.total_weight()) });
    }
    let squares = arr
        .betas()
        .iter()
        .map(|b| {
            let t = BigRational::one() - b;
            &t * &t
        })
        .fold(BigRational::zero(), |a, x| a + x);
    Ok(int(3) / int(2) - squares / int(2))
}

/// Logarithmic `c_2` of a normal-crossing pair with smooth components:
/// `c_2(M) + sum_j t_j (K.D_j + D_j^2) + (1/2) sum_{j != k} t_j t_k D_j.D_k`
/// with `t_j = 1 - beta_j`, specialised to lines in the plane
/// (`K.L + L^2 = -2`, `L_j.L_k = 1`, no singular points on the lines).
pub fn tian_c2_generic(arr: &WeightedArrangement) -> Result<BigRational> {
    require_generic(&arr.multiple_points())?;
    let t: Vec<BigRational> = arr.betas().iter().map(|b| BigRational::one() - b).collect();
    let mut value = int(3);
    for tj in &t {
        value += tj * int(-2);
    }
    let mut cross = BigRational::zero();
    for (j, tj) in t.iter().enumerate() {
        for (k, tk) in t.iter().enumerate() {
            if j != k {
                cross += tj * tk;
            }
        }
    }
    Ok(value + cross / int(2))
}

/// Euler characteristic weighted by the metric density on each stratum:
/// `e(P^2 \ C) + sum_j beta_j chi(L_j^x) + sum_i nu_i`.
pub fn weighted_euler(arr: &WeightedArrangement) -> Result<BigRational> {
    let points = arr.multiple_points();
    let nu = densities(arr, &points)?;
    // chi of the union of lines by inclusion-exclusion over the points
    let chi_curve = 2 * arr.len() as i64 - points.iter().map(|p| p.multiplicity() as i64 - 1).sum::<i64>();
    let complement = int(3 - chi_curve);
    let lines = arr
        .betas()
        .iter()
        .enumerate()
        .map(|(j, b)| b * int(chi_open_line(j, &points)))
        .fold(BigRational::zero(), |a, x| a + x);
    let pts = nu.into_iter().fold(BigRational::zero(), |a, x| a + x);
    Ok(complement + lines + pts)
}

/// `(3 - sum_j (1 - beta_j))^2`.
pub fn c1_squared(arr: &WeightedArrangement) -> BigRational {
    let c1 = int(3) - arr.total_weight();
    &c1 * &c1
}

#[derive(Clone, Debug, PartialEq)]
pub struct BmyReport {
    /// `3 c_2(X, D)`.
    pub lhs: BigRational,
    /// `c_1(X, D)^2`.
    pub rhs: BigRational,
    pub defect: BigRational,
    pub satisfied: bool,
}

/// Logarithmic Bogomolov-Miyaoka-Yau comparison `3 c_2(X, D) >= c_1(X, D)^2`,
/// with the cone densities standing in for the local orbifold Euler numbers.
pub fn bmy_report(arr: &WeightedArrangement) -> Result<BmyReport> {
    let lhs = int(3) * log_c2(arr)?;
    let rhs = c1_squared(arr);
    let defect = &lhs - &rhs;
    let satisfied = !defect.is_negative();
    Ok(BmyReport { lhs, rhs, defect, satisfied })
}

/// An exact value with its float rendering.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactValue {
    pub exact: String,
    pub float: f64,
}

impl From<&BigRational> for ExactValue {
    fn from(q: &BigRational) -> Self {
        ExactValue { exact: format_rational(q), float: rational_to_f64(q) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantReport {
    /// Present only for Calabi-Yau arrangements.
    pub energy: Option<ExactValue>,
    pub log_c2: ExactValue,
    /// Alias of `log_c2`: the second parabolic Chern character of the
    /// associated parabolic bundle takes the same value.
    pub parch2: ExactValue,
    pub c1_squared: ExactValue,
    pub bmy_defect: ExactValue,
    pub bmy_satisfied: bool,
    pub weighted_euler: ExactValue,
    pub per_line_chi: Vec<i64>,
    pub per_point_density: Vec<ExactValue>,
    pub calabi_yau: bool,
    /// The curvature-integral reading of the defect is conjectural.
    pub labels: Vec<&'static str>,
}

pub fn invariant_report(arr: &WeightedArrangement) -> Result<InvariantReport> {
    let points = arr.multiple_points();
    let nu = densities(arr, &points)?;
    let c2 = log_c2_from(arr, &points, &nu);
    let c1sq = c1_squared(arr);
    let defect = int(3) * &c2 - &c1sq;
    let calabi_yau = arr.is_calabi_yau();
    Ok(InvariantReport {
        energy: calabi_yau.then(|| ExactValue::from(&c2)),
        log_c2: ExactValue::from(&c2),
        parch2: ExactValue::from(&c2),
        c1_squared: ExactValue::from(&c1sq),
        bmy_satisfied: !defect.is_negative(),
        bmy_defect: ExactValue::from(&defect),
        weighted_euler: ExactValue::from(&weighted_euler(arr)?),
        per_line_chi: (0..arr.len()).map(|j| chi_open_line(j, &points)).collect(),
        per_point_density: nu.iter().map(ExactValue::from).collect(),
        calabi_yau,
        labels: vec!["conjectural-chern-weil"],
    })
}
