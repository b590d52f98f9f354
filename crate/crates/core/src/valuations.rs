//! Local tangent-cone models of curve germs with a cone angle, and the
//! normalized volume of monomial valuations.
//!
//! Four germ families are covered: irreducible germs with one Puiseux pair
//! `(d, e)`, ordinary `d`-fold points, two smooth branches with simple
//! tangency (`y (y - x^2)`), and `A_k` curves `w^2 = z^{k+1}`. For each one
//! the density `nu` is piecewise: a quasi-regular PK cone while the
//! Troyanov-type inequalities hold, and a product cone once the tangent cone
//! jumps. Jumped assignments are flagged `conjectural`.

use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimize::{bisect_derivative, golden_section};
use crate::pk_cone::PkCone;
use crate::scalar::{rat, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TangentRegime {
    /// The germ's own PK model (regular, quasi-regular, or for a node the
    /// product of the two branches): no jump.
    QuasiRegularCone,
    /// The tangent cone has jumped to a product of flat cones.
    ProductJump,
    /// On the klt wall: the model collapses and `nu = 0`.
    Collapsed,
    NonKlt,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TangentConeResult {
    pub regime: TangentRegime,
    pub density: Scalar,
    pub cone: Option<PkCone>,
    /// Ray `y / x` of the minimizing monomial valuation, where known.
    pub minimizer_ray: Option<Scalar>,
    /// The tangent-cone assignment is expected, not proved.
    pub conjectural: bool,
}

impl TangentConeResult {
    fn collapsed() -> Self {
        TangentConeResult {
            regime: TangentRegime::Collapsed,
            density: Scalar::zero(),
            cone: None,
            minimizer_ray: None,
            conjectural: false,
        }
    }
}

fn check_irreducible(d: u64, e: u64) -> Result<()> {
    if d < 2 || d >= e || d.gcd(&e) != 1 {
        return Err(Error::InvalidGerm(format!(
            "Puiseux pair ({d}, {e}) needs 2 <= d < e with gcd(d, e) = 1"
        )));
    }
    Ok(())
}

fn check_unit_interval(beta: &Scalar) -> Result<()> {
    if beta.is_positive() && *beta < Scalar::one() {
        Ok(())
    } else {
        Err(Error::InvalidGerm(format!("cone angle parameter {beta} outside (0, 1)")))
    }
}

/// Log canonical threshold `1/d + 1/e` of a germ with Puiseux pair `(d, e)`.
pub fn lct_irreducible(d: u64, e: u64) -> Result<BigRational> {
    check_irreducible(d, e)?;
    Ok(rat(1, d as i64) + rat(1, e as i64))
}

/// Jump threshold `1 - 1/d + 1/e`.
pub fn beta_star(d: u64, e: u64) -> Result<BigRational> {
    check_irreducible(d, e)?;
    Ok(rat(1, 1) - rat(1, d as i64) + rat(1, e as i64))
}

/// Density of the tangent cone of `(C^2, (1 - beta) C)` for an irreducible
/// germ `C` with Puiseux pair `(d, e)`.
pub fn density_irreducible(d: u64, e: u64, beta: &Scalar) -> Result<TangentConeResult> {
    let lct = Scalar::Exact(lct_irreducible(d, e)?);
    check_unit_interval(beta)?;
    let wall = Scalar::one() - &lct;
    if *beta < wall {
        return Err(Error::NonKlt(format!("beta = {beta} <= 1 - lct = {wall}")));
    }
    if *beta == wall {
        return Ok(TangentConeResult::collapsed());
    }
    let (ds, es) = (Scalar::int(d as i64), Scalar::int(e as i64));
    let star = Scalar::Exact(beta_star(d, e)?);
    if *beta < star {
        let inv_e = Scalar::one() / &es;
        let inv_d = Scalar::one() / &ds;
        let cone = PkCone::quasi_regular(e, d, vec![inv_e, inv_d, beta.clone()])?;
        Ok(TangentConeResult {
            regime: TangentRegime::QuasiRegularCone,
            density: cone.density().clone(),
            cone: Some(cone),
            minimizer_ray: Some(&ds / &es),
            conjectural: false,
        })
    } else {
        let gamma_star = &ds * beta + Scalar::one() - &ds;
        let cone = PkCone::product(Scalar::one(), gamma_star.clone())?;
        Ok(TangentConeResult {
            regime: TangentRegime::ProductJump,
            density: gamma_star.clone(),
            cone: Some(cone),
            minimizer_ray: Some(gamma_star),
            conjectural: true,
        })
    }
}

/// Normalized volume of the monomial valuation with weights `(x, y)`:
/// `(x + y - (1 - beta) min(d x, e y))^2 / (4 x y)`.
pub fn normalized_volume(d: u64, e: u64, beta: f64, x: f64, y: f64) -> f64 {
    let discrepancy = x + y - (1.0 - beta) * (d as f64 * x).min(e as f64 * y);
    discrepancy * discrepancy / (4.0 * x * y)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VolumeMinimum {
    pub min_value: f64,
    /// `y / x` at the minimum.
    pub minimizer_ray: f64,
    pub iterations: usize,
}

/// Minimizes [`normalized_volume`] over `x, y > 0`.
///
/// The objective is 0-homogeneous, so it is minimized along `x = 1`. It is
/// smooth on either side of the kink `y = d/e`, and on each side the
/// log-discrepancy is linear, `A(y) = p + q y`. Each branch is searched by
/// golden section in `log y`, then the bracket is polished by bisection on
/// the sign of `F'(y) = A (q y - p) / (4 y^2)`. Equal branch minima (within
/// `tol`) resolve to the smaller ray.
pub fn minimize_normalized_volume(d: u64, e: u64, beta: f64, tol: f64) -> Result<VolumeMinimum> {
    check_irreducible(d, e)?;
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::InvalidGerm(format!("beta = {beta} outside (0, 1]")));
    }
    let wall = 1.0 - 1.0 / d as f64 - 1.0 / e as f64;
    if beta <= wall {
        return Err(Error::NonKlt(format!("beta = {beta} <= 1 - lct = {wall}")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance {tol} must be positive")));
    }
    let (df, ef) = (d as f64, e as f64);
    let kink = df / ef;
    let objective = |y: f64| normalized_volume(d, e, beta, 1.0, y);
    // (y range, p, q) with A(y) = p + q y on the branch
    let branches = [
        ((kink * (-40f64).exp(), kink), 1.0, 1.0 - (1.0 - beta) * ef),
        ((kink, (4.0 * kink).max(4.0)), 1.0 - (1.0 - beta) * df, 1.0),
    ];
    let mut best: Option<VolumeMinimum> = None;
    for ((y_lo, y_hi), p, q) in branches {
        let coarse = golden_section(|u| objective(u.exp()), y_lo.ln(), y_hi.ln(), 1e-11, 400)?;
        let centre = coarse.x.exp();
        let lo = (centre * (1.0 - 1e-6)).max(y_lo);
        let hi = (centre * (1.0 + 1e-6)).min(y_hi);
        let derivative = |y: f64| (p + q * y) * (q * y - p) / (4.0 * y * y);
        let y = bisect_derivative(derivative, lo, hi);
        let candidate = VolumeMinimum {
            min_value: objective(y),
            minimizer_ray: y,
            iterations: coarse.iterations,
        };
        best = Some(match best {
            None => candidate,
            Some(b) if (candidate.min_value - b.min_value).abs() <= tol => {
                if candidate.minimizer_ray < b.minimizer_ray {
                    candidate
                } else {
                    b
                }
            }
            Some(b) if candidate.min_value < b.min_value => candidate,
            Some(b) => b,
        });
    }
    let best = best.expect("two branches");
    if !best.min_value.is_finite() {
        return Err(Error::NumericFailure {
            message: "normalized volume is not finite at the minimum".into(),
            estimate: f64::INFINITY,
        });
    }
    Ok(best)
}

/// Density at an ordinary `d`-fold point with weights `betas` (any order).
pub fn density_ordinary(betas: &[Scalar]) -> Result<TangentConeResult> {
    if betas.len() < 2 {
        return Err(Error::InvalidGerm("an ordinary point needs at least two lines".into()));
    }
    for b in betas {
        check_unit_interval(b)?;
    }
    let mut sorted = betas.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite weights"));
    let total: Scalar = sorted.iter().map(|b| Scalar::one() - b).sum();
    if total >= Scalar::int(2) {
        return Err(Error::NonKlt(format!("sum of (1 - beta) = {total} >= 2")));
    }
    let excess = Scalar::int(2) - &total;
    let min = &sorted[0];
    let troyanov = excess.is_positive() && excess < Scalar::int(2) * min;
    if troyanov && sorted.len() >= 3 {
        let cone = PkCone::regular(sorted)?;
        return Ok(TangentConeResult {
            regime: TangentRegime::QuasiRegularCone,
            density: cone.density().clone(),
            cone: Some(cone),
            minimizer_ray: None,
            conjectural: false,
        });
    }
    // outside the Troyanov region: C_{beta_1} x C_{gamma*},
    // 1 - gamma* = sum_{j >= 2} (1 - beta_j)
    let rest: Scalar = sorted[1..].iter().map(|b| Scalar::one() - b).sum();
    let gamma_star = Scalar::one() - rest;
    let cone = PkCone::product(min.clone(), gamma_star.clone())?;
    let node = sorted.len() == 2;
    Ok(TangentConeResult {
        regime: if node { TangentRegime::QuasiRegularCone } else { TangentRegime::ProductJump },
        density: min * &gamma_star,
        cone: Some(cone),
        minimizer_ray: None,
        conjectural: !node,
    })
}

/// Tangent pair `y (y - x^2)` with weight `beta1` on `y = 0` and `beta2` on
/// `y = x^2`.
///
/// Inside the rhombus `|beta2 - beta1| < 1/2`, `1/2 < beta1 + beta2 < 3/2`
/// the model is the double cover of the regular cone with angles
/// `(1/2, beta1, beta2)` and `nu = (2 beta1 + 2 beta2 - 1)^2 / 8`. The three
/// exit walls lead to the product cones `C x C_{beta1+beta2-1}`,
/// `C_{2 beta2 - 1} x C_{beta1}` and `C_{2 beta1 - 1} x C_{beta2}`; the
/// fourth wall `beta1 + beta2 = 1/2` and everything below it is not klt.
pub fn classify_tangent_pair(beta1: &Scalar, beta2: &Scalar) -> Result<TangentConeResult> {
    check_unit_interval(beta1)?;
    check_unit_interval(beta2)?;
    let half = Scalar::ratio(1, 2);
    let one = Scalar::one();
    let two = Scalar::int(2);
    let sum = beta1 + beta2;
    let jump = |cone: PkCone, on_wall: bool| -> Result<TangentConeResult> {
        Ok(TangentConeResult {
            regime: TangentRegime::ProductJump,
            density: cone.density().clone(),
            cone: Some(cone),
            minimizer_ray: None,
            conjectural: !on_wall,
        })
    };
    if sum <= half {
        return Ok(TangentConeResult {
            regime: TangentRegime::NonKlt,
            density: Scalar::zero(),
            cone: None,
            minimizer_ray: None,
            conjectural: false,
        });
    }
    let merge_wall = Scalar::ratio(3, 2);
    if sum >= merge_wall {
        let cone = PkCone::product(one.clone(), &sum - &one)?;
        return jump(cone, sum == merge_wall);
    }
    let gap = beta2 - beta1;
    if gap >= half {
        let cone = PkCone::product(&two * beta2 - &one, beta1.clone())?;
        return jump(cone, gap == half);
    }
    if -&gap >= half {
        let cone = PkCone::product(&two * beta1 - &one, beta2.clone())?;
        return jump(cone, -&gap == half);
    }
    let cone = PkCone::quasi_regular(2, 1, vec![half.clone(), beta1.clone(), beta2.clone()])?;
    Ok(TangentConeResult {
        regime: TangentRegime::QuasiRegularCone,
        density: cone.density().clone(),
        cone: Some(cone),
        minimizer_ray: None,
        conjectural: false,
    })
}

/// Open interval `((k - 1)/(2k + 2), (k + 3)/(2k + 2))` of weights for which
/// an `A_k` curve `w^2 = z^{k+1}` has a PK tangent cone.
pub fn ak_stable_range(k: u64) -> Result<(BigRational, BigRational)> {
    if k < 1 {
        return Err(Error::InvalidGerm("A_k needs k >= 1".into()));
    }
    let k = k as i64;
    Ok((rat(k - 1, 2 * k + 2), rat(k + 3, 2 * k + 2)))
}

/// A germ with its cone-angle parameters, as read from germ JSON such as
/// `{"kind":"irreducible","d":2,"e":3,"beta":"1/2"}`.
#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GermSpec {
    Irreducible { d: u64, e: u64, beta: Scalar },
    Ordinary { betas: Vec<Scalar> },
    TangentPair { betas: (Scalar, Scalar) },
    Ak { k: u64, beta: Scalar },
}

impl GermSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GermReport {
    pub germ: GermSpec,
    pub tangent_cone: Option<TangentConeResult>,
    /// Irreducible germs: the jump threshold `beta*`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jump_threshold: Option<Scalar>,
    /// Irreducible germs: the numerical minimum of the normalized volume.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub valuation_minimum: Option<VolumeMinimum>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stable_range: Option<(Scalar, Scalar)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub in_stable_range: Option<bool>,
}

/// Runs the matching density computation; for `A_k` also reports the stable
/// range and, when the germ falls in a covered family (`k = 1`, `k = 3`, or
/// `k` even), its density.
pub fn analyze_germ(germ: &GermSpec, tol: f64) -> Result<GermReport> {
    let mut report = GermReport {
        germ: germ.clone(),
        tangent_cone: None,
        jump_threshold: None,
        valuation_minimum: None,
        stable_range: None,
        in_stable_range: None,
    };
    match germ {
        GermSpec::Irreducible { d, e, beta } => {
            report.tangent_cone = Some(density_irreducible(*d, *e, beta)?);
            report.jump_threshold = Some(Scalar::Exact(beta_star(*d, *e)?));
            let wall = Scalar::one() - Scalar::Exact(lct_irreducible(*d, *e)?);
            if *beta > wall {
                report.valuation_minimum = Some(minimize_normalized_volume(*d, *e, beta.to_f64(), tol)?);
            }
        }
        GermSpec::Ordinary { betas } => report.tangent_cone = Some(density_ordinary(betas)?),
        GermSpec::TangentPair { betas } => {
            report.tangent_cone = Some(classify_tangent_pair(&betas.0, &betas.1)?)
        }
        GermSpec::Ak { k, beta } => {
            let (lo, hi) = ak_stable_range(*k)?;
            let (lo, hi) = (Scalar::Exact(lo), Scalar::Exact(hi));
            report.in_stable_range = Some(*beta > lo && *beta < hi);
            report.stable_range = Some((lo, hi));
            report.tangent_cone = match *k {
                1 => Some(density_ordinary(&[beta.clone(), beta.clone()])?),
                3 => Some(classify_tangent_pair(beta, beta)?),
                k if k % 2 == 0 => match density_irreducible(2, k + 1, beta) {
                    Ok(r) => Some(r),
                    Err(Error::NonKlt(_)) => None,
                    Err(e) => return Err(e),
                },
                _ => None,
            };
        }
    }
    Ok(report)
}
