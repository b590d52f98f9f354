//! Polyhedral Kähler cones: the tangent-cone models at multiple points.
//!
//! A regular cone with conical lines of angles `2 pi beta_k` has
//! `2 gamma = 2 + sum(beta_k - 1)` and volume density `gamma^2`. A product
//! `C_{beta_1} x C_{beta_2}` has density `beta_1 beta_2`. A quasi-regular cone
//! is the pull-back of a regular one by `(z, w) -> (z^p, w^q)` and has
//! density `p q` times the regular density.

use std::f64::consts::PI;

use num_rational::BigRational;
use serde::{Serialize, Serializer};

use crate::arrangement::{troyanov, MultiplePoint, PointClass, WeightedArrangement};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Ratio tolerance used when float angles are compared for equality.
pub const FLOAT_RATIO_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum ConeKind {
    Regular,
    /// Pull-back of a regular cone by `(z, w) -> (z^p, w^q)`.
    QuasiRegular { p: u64, q: u64 },
    Product,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PkCone {
    kind: ConeKind,
    /// Regular: angles of the conical lines. Quasi-regular: angles of the
    /// underlying regular cone. Product: the two factors.
    angles: Vec<Scalar>,
    /// Regular and quasi-regular only (of the underlying regular cone).
    gamma: Option<Scalar>,
    density: Scalar,
}

fn half_excess(angles: &[Scalar]) -> Scalar {
    // gamma = (2 + sum(beta - 1)) / 2
    let excess = angles.iter().fold(Scalar::int(2), |acc, b| acc + b - Scalar::one());
    excess / Scalar::int(2)
}

fn check_angle(b: &Scalar, allow_one: bool) -> Result<()> {
    let ok = b.is_positive() && if allow_one { *b <= Scalar::one() } else { *b < Scalar::one() };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("cone angle parameter {b} out of range")))
    }
}

impl PkCone {
    /// Regular cone over the spherical metric with the given cone angles.
    /// Needs at least three lines satisfying the Troyanov conditions, or two
    /// equal angles.
    pub fn regular(angles: Vec<Scalar>) -> Result<Self> {
        for b in &angles {
            check_angle(b, false)?;
        }
        let admissible = match angles.len() {
            0 | 1 => false,
            2 => angles[0] == angles[1],
            _ => match angles.iter().map(|a| a.as_exact()).collect::<Option<Vec<_>>>() {
                Some(exact) => troyanov(exact.into_iter()),
                None => {
                    let excess = 2.0 * half_excess(&angles).to_f64();
                    let min = angles.iter().map(Scalar::to_f64).fold(f64::INFINITY, f64::min);
                    excess > 0.0 && excess < 2.0 * min
                }
            },
        };
        if !admissible {
            return Err(Error::InvalidInput(
                "angles violate the Troyanov conditions for a regular cone".into(),
            ));
        }
        let gamma = half_excess(&angles);
        let density = &gamma * &gamma;
        Ok(PkCone { kind: ConeKind::Regular, angles, gamma: Some(gamma), density })
    }

    /// Pull-back of the regular cone with `angles` by `(z, w) -> (z^p, w^q)`.
    pub fn quasi_regular(p: u64, q: u64, angles: Vec<Scalar>) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::InvalidInput("covering degrees must be positive".into()));
        }
        let base = PkCone::regular(angles)?;
        let density = Scalar::int((p * q) as i64) * &base.density;
        Ok(PkCone {
            kind: ConeKind::QuasiRegular { p, q },
            angles: base.angles,
            gamma: base.gamma,
            density,
        })
    }

    /// `C_{beta_1} x C_{beta_2}`; a factor equal to 1 is a smooth factor.
    pub fn product(beta1: Scalar, beta2: Scalar) -> Result<Self> {
        check_angle(&beta1, true)?;
        check_angle(&beta2, true)?;
        let density = &beta1 * &beta2;
        Ok(PkCone { kind: ConeKind::Product, angles: vec![beta1, beta2], gamma: None, density })
    }

    pub fn kind(&self) -> &ConeKind {
        &self.kind
    }

    pub fn angles(&self) -> &[Scalar] {
        &self.angles
    }

    pub fn gamma(&self) -> Option<&Scalar> {
        self.gamma.as_ref()
    }

    /// Link volume divided by the volume `2 pi^2` of the round 3-sphere.
    pub fn density(&self) -> &Scalar {
        &self.density
    }

    fn product_factors(&self) -> Option<(&Scalar, &Scalar)> {
        match self.kind {
            ConeKind::Product => Some((&self.angles[0], &self.angles[1])),
            _ => None,
        }
    }
}

/// The model cone at a stable multiple point: regular for `d >= 3`, the
/// product of the two flat cones for a double point.
pub fn cone_at_point(point: &MultiplePoint, arr: &WeightedArrangement) -> Result<PkCone> {
    let class = arr.classify_point(point);
    if class != PointClass::Stable {
        return Err(Error::NotStable {
            location: point.location.to_string(),
            class: format!("{class:?}"),
        });
    }
    let angles: Vec<Scalar> = arr.incident_betas(point).cloned().map(Scalar::Exact).collect();
    if angles.len() == 2 {
        let mut it = angles.into_iter();
        PkCone::product(it.next().unwrap(), it.next().unwrap())
    } else {
        PkCone::regular(angles)
    }
}

/// Behaviour of the Reeb orbits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReebType {
    Regular,
    QuasiRegular,
    Irregular,
}

/// Regular cones are regular. A product with exact factors has rational
/// ratio, so it is regular when the factors agree and quasi-regular
/// otherwise. A product with a float factor is treated as having an
/// irrational ratio unless the factors agree to [`FLOAT_RATIO_TOLERANCE`].
pub fn classify_reeb(cone: &PkCone) -> ReebType {
    match cone.kind {
        ConeKind::Regular => ReebType::Regular,
        ConeKind::QuasiRegular { .. } => ReebType::QuasiRegular,
        ConeKind::Product => {
            let (b1, b2) = cone.product_factors().unwrap();
            match (b1.as_exact(), b2.as_exact()) {
                (Some(x), Some(y)) if x == y => ReebType::Regular,
                (Some(_), Some(_)) => ReebType::QuasiRegular,
                _ if ((b1.to_f64() / b2.to_f64()) - 1.0).abs() < FLOAT_RATIO_TOLERANCE => {
                    ReebType::Regular
                }
                _ => ReebType::Irregular,
            }
        }
    }
}

/// Degrees of homogeneous holomorphic functions up to `cutoff`, ascending,
/// with multiplicity: `{m / gamma}` for regular cones and
/// `{m / beta_1 + n / beta_2}` for products.
pub fn holomorphic_spectrum(cone: &PkCone, cutoff: &Scalar) -> Result<Vec<Scalar>> {
    let mut out = Vec::new();
    if cutoff.is_negative() {
        return Ok(out);
    }
    match cone.kind {
        ConeKind::Regular => {
            let step = Scalar::one() / cone.gamma.as_ref().unwrap();
            for m in 0i64.. {
                let value = Scalar::int(m) * &step;
                if value > *cutoff {
                    break;
                }
                out.push(value);
            }
        }
        ConeKind::Product => {
            let (b1, b2) = cone.product_factors().unwrap();
            let s1 = Scalar::one() / b1;
            let s2 = Scalar::one() / b2;
            for m in 0i64.. {
                let m_term = Scalar::int(m) * &s1;
                if m_term > *cutoff {
                    break;
                }
                for n in 0i64.. {
                    let value = &m_term + Scalar::int(n) * &s2;
                    if value > *cutoff {
                        break;
                    }
                    out.push(value);
                }
            }
            out.sort_by(|a, b| a.partial_cmp(b).expect("finite spectrum"));
        }
        ConeKind::QuasiRegular { .. } => {
            return Err(Error::UnsupportedCone(
                "holomorphic spectrum is only provided for regular and product cones".into(),
            ))
        }
    }
    Ok(out)
}

/// Upper end of the admissible decay rates at a point with this model cone.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayRate {
    /// Rates in `(0, mu_max)` are admissible.
    pub mu_max: Scalar,
    /// Smallest holomorphic degree strictly greater than 2.
    pub first_degree_above_two: Scalar,
    /// Always set: only holomorphic degrees are searched, not the full
    /// harmonic spectrum of the link.
    pub holomorphic_bound_only: bool,
}

/// `mu_max = min(lambda_H - 2, 1)` with `lambda_H` the first holomorphic
/// degree above 2.
pub fn decay_rate_mu(cone: &PkCone) -> Result<DecayRate> {
    let two = Scalar::int(2);
    let mut cutoff = Scalar::int(4);
    loop {
        let spectrum = holomorphic_spectrum(cone, &cutoff)?;
        if let Some(first) = spectrum.into_iter().find(|x| *x > two) {
            let mu_max = (&first - &two).min(Scalar::one());
            return Ok(DecayRate { mu_max, first_degree_above_two: first, holomorphic_bound_only: true });
        }
        cutoff = cutoff * Scalar::int(2);
    }
}

/// The 2-homogeneous Reeb-invariant harmonic function
/// `h = |z1|^{2 beta_1} - |z2|^{2 beta_2}` on a product cone, alongside
/// `r^2 = |z1|^{2 beta_1} + |z2|^{2 beta_2}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwoHomogeneous {
    pub exponents: (Scalar, Scalar),
}

impl TwoHomogeneous {
    pub fn h(&self, z1_abs: f64, z2_abs: f64) -> f64 {
        z1_abs.powf(self.exponents.0.to_f64()) - z2_abs.powf(self.exponents.1.to_f64())
    }

    pub fn radius_squared(&self, z1_abs: f64, z2_abs: f64) -> f64 {
        z1_abs.powf(self.exponents.0.to_f64()) + z2_abs.powf(self.exponents.1.to_f64())
    }
}

pub fn two_homogeneous_function(cone: &PkCone) -> Result<TwoHomogeneous> {
    let (b1, b2) = cone.product_factors().ok_or(Error::NotProduct)?;
    let two = Scalar::int(2);
    Ok(TwoHomogeneous { exponents: (&two * b1, &two * b2) })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinkVolume {
    /// `2 pi^2 nu`.
    pub volume: f64,
    /// Regular cones: length `2 pi gamma` of the Hopf fibres.
    pub fiber_length: Option<f64>,
    /// Regular cones: area `pi gamma` of the spherical polygon cut from the base.
    pub polygon_area: Option<f64>,
}

pub fn link_volume(cone: &PkCone) -> LinkVolume {
    let volume = 2.0 * PI * PI * cone.density.to_f64();
    let regular_gamma = match cone.kind {
        ConeKind::Regular => cone.gamma.as_ref().map(Scalar::to_f64),
        _ => None,
    };
    LinkVolume {
        volume,
        fiber_length: regular_gamma.map(|g| 2.0 * PI * g),
        polygon_area: regular_gamma.map(|g| PI * g),
    }
}

fn kind_name(kind: &ConeKind) -> &'static str {
    match kind {
        ConeKind::Regular => "regular",
        ConeKind::QuasiRegular { .. } => "quasi-regular",
        ConeKind::Product => "product",
    }
}

impl Serialize for PkCone {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct ConeDoc {
            kind: &'static str,
            #[serde(skip_serializing_if = "Option::is_none")]
            covering: Option<(u64, u64)>,
            angles: Vec<String>,
            #[serde(skip_serializing_if = "Option::is_none")]
            gamma: Option<String>,
            density: f64,
            #[serde(skip_serializing_if = "Option::is_none")]
            density_exact: Option<String>,
            reeb: ReebType,
        }
        let covering = match self.kind {
            ConeKind::QuasiRegular { p, q } => Some((p, q)),
            _ => None,
        };
        ConeDoc {
            kind: kind_name(&self.kind),
            covering,
            angles: self.angles.iter().map(|a| a.to_string()).collect(),
            gamma: self.gamma.as_ref().map(|g| g.to_string()),
            density: self.density.to_f64(),
            density_exact: self.density.exact_string(),
            reeb: classify_reeb(self),
        }
        .serialize(serializer)
    }
}

/// Exact density of a cone built from exact angles.
pub(crate) fn exact_density(cone: &PkCone) -> BigRational {
    cone.density.as_exact().cloned().expect("exact angles give an exact density")
}

/// Spectrum rendered as floats with the exact value when available.
pub fn spectrum_json(spectrum: &[Scalar]) -> serde_json::Value {
    serde_json::Value::Array(
        spectrum
            .iter()
            .map(|x| {
                let mut obj = serde_json::Map::new();
                if let Some(e) = x.exact_string() {
                    obj.insert("exact".into(), e.into());
                }
                obj.insert("float".into(), serde_json::json!(x.to_f64()));
                serde_json::Value::Object(obj)
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{ProjLine, WeightedArrangement};
    use crate::scalar::rat;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    fn pencil(betas: &[(i64, i64)]) -> WeightedArrangement {
        let lines = (0..betas.len() as i64).map(|t| ProjLine::from_ints(1, t, 0).unwrap()).collect();
        WeightedArrangement::new(lines, betas.iter().map(|&(p, d)| rat(p, d)).collect()).unwrap()
    }

    #[test]
    fn cone_at_triple_and_double_points() {
        let arr = pencil(&[(1, 2), (1, 2), (1, 2)]);
        let cone = cone_at_point(&arr.multiple_points()[0], &arr).unwrap();
        assert_eq!(cone.kind(), &ConeKind::Regular);
        assert_eq!(cone.gamma(), Some(&q(1, 4)));
        assert_eq!(cone.density(), &q(1, 16));

        let arr = pencil(&[(1, 2), (1, 2)]);
        let cone = cone_at_point(&arr.multiple_points()[0], &arr).unwrap();
        assert_eq!(cone.kind(), &ConeKind::Product);
        assert_eq!(cone.density(), &q(1, 4));

        let arr = pencil(&[(1, 4), (3, 4), (3, 4)]);
        assert!(matches!(
            cone_at_point(&arr.multiple_points()[0], &arr),
            Err(Error::NotStable { .. })
        ));
    }

    #[test]
    fn reeb_classification() {
        let p = PkCone::product(q(1, 2), q(1, 3)).unwrap();
        assert_eq!(classify_reeb(&p), ReebType::QuasiRegular);
        let beta = 0.3;
        let irr = PkCone::product(Scalar::Float(beta), Scalar::Float(beta * 2f64.sqrt())).unwrap();
        assert_eq!(classify_reeb(&irr), ReebType::Irregular);
        let reg = PkCone::regular(vec![q(1, 2); 3]).unwrap();
        assert_eq!(classify_reeb(&reg), ReebType::Regular);
        let diag = PkCone::product(q(2, 5), q(2, 5)).unwrap();
        assert_eq!(classify_reeb(&diag), ReebType::Regular);
    }

    #[test]
    fn spectrum_anchors() {
        let reg = PkCone::regular(vec![q(1, 2); 3]).unwrap();
        assert_eq!(holomorphic_spectrum(&reg, &Scalar::int(13)).unwrap(), vec![
            Scalar::int(0),
            Scalar::int(4),
            Scalar::int(8),
            Scalar::int(12)
        ]);
        let p = PkCone::product(q(1, 2), q(1, 3)).unwrap();
        let want: Vec<Scalar> = [0, 2, 3, 4, 5, 6, 6].iter().map(|&n| Scalar::int(n)).collect();
        assert_eq!(holomorphic_spectrum(&p, &Scalar::int(6)).unwrap(), want);
        assert_eq!(holomorphic_spectrum(&p, &Scalar::zero()).unwrap(), vec![Scalar::zero()]);
        assert_eq!(holomorphic_spectrum(&reg, &Scalar::zero()).unwrap(), vec![Scalar::zero()]);
    }

    #[test]
    fn spectrum_by_brute_enumeration() {
        // oracle: all (m, n) in a box, filtered and sorted
        let (b1, b2) = (rat(3, 7), rat(5, 11));
        let cone = PkCone::product(Scalar::Exact(b1.clone()), Scalar::Exact(b2.clone())).unwrap();
        let cutoff = rat(17, 2);
        let mut oracle = Vec::new();
        for m in 0..40i64 {
            for n in 0..40i64 {
                let v = rat(m, 1) / &b1 + rat(n, 1) / &b2;
                if v <= cutoff {
                    oracle.push(v);
                }
            }
        }
        oracle.sort();
        let got: Vec<BigRational> = holomorphic_spectrum(&cone, &Scalar::Exact(cutoff))
            .unwrap()
            .into_iter()
            .map(|s| s.as_exact().unwrap().clone())
            .collect();
        assert_eq!(got, oracle);
    }

    #[test]
    fn decay_rates() {
        let reg = PkCone::regular(vec![q(1, 2); 3]).unwrap();
        assert_eq!(decay_rate_mu(&reg).unwrap().mu_max, Scalar::one());
        let p = PkCone::product(q(9, 10), q(4, 5)).unwrap();
        let d = decay_rate_mu(&p).unwrap();
        assert_eq!(d.first_degree_above_two, q(20, 9));
        assert_eq!(d.mu_max, q(2, 9));
        assert!(d.mu_max.is_exact());
        assert!(d.holomorphic_bound_only);
        let p = PkCone::product(q(1, 2), q(1, 3)).unwrap();
        assert_eq!(decay_rate_mu(&p).unwrap().mu_max, Scalar::one());
        // small gamma needs the cutoff to grow past the default
        let thin = PkCone::product(q(1, 100), q(1, 100)).unwrap();
        assert_eq!(decay_rate_mu(&thin).unwrap().first_degree_above_two, Scalar::int(100));
    }

    #[test]
    fn two_homogeneous_exponents() {
        let p = PkCone::product(q(1, 2), q(1, 3)).unwrap();
        let h = two_homogeneous_function(&p).unwrap();
        assert_eq!(h.exponents, (Scalar::one(), q(2, 3)));
        let s = two_homogeneous_function(&PkCone::product(q(2, 5), q(2, 5)).unwrap()).unwrap();
        assert_eq!(s.exponents.0, s.exponents.1);
        let reg = PkCone::regular(vec![q(1, 2); 3]).unwrap();
        assert_eq!(two_homogeneous_function(&reg), Err(Error::NotProduct));
        // scaling r -> t r sends z_i -> t^{1/beta_i} z_i and h -> t^2 h
        let t: f64 = 1.7;
        let (a, b) = (0.8, 1.3);
        let scaled = h.h(a * t.powf(2.0), b * t.powf(3.0));
        assert!((scaled - t * t * h.h(a, b)).abs() < 1e-12);
    }

    #[test]
    fn link_volumes() {
        let reg = PkCone::regular(vec![q(1, 2); 3]).unwrap();
        let v = link_volume(&reg);
        assert!((v.volume - 2.0 * PI * PI / 16.0).abs() < 1e-15);
        assert!((v.polygon_area.unwrap() - PI / 4.0).abs() < 1e-15);
        assert!((v.fiber_length.unwrap() - PI / 2.0).abs() < 1e-15);
        let p = PkCone::product(q(1, 2), q(1, 2)).unwrap();
        assert!((link_volume(&p).volume - PI * PI / 2.0).abs() < 1e-15);
        let smooth = PkCone::product(Scalar::one(), Scalar::one()).unwrap();
        assert!((link_volume(&smooth).volume - 2.0 * PI * PI).abs() < 1e-15);
    }

    #[test]
    fn quasi_regular_density_scales_by_degree() {
        let cone = PkCone::quasi_regular(3, 2, vec![q(1, 3), q(1, 2), q(1, 2)]).unwrap();
        // gamma = (2 - 2/3 - 1/2 - 1/2) / 2 = 1/6
        assert_eq!(cone.gamma(), Some(&q(1, 6)));
        assert_eq!(cone.density(), &q(1, 6));
        assert_eq!(classify_reeb(&cone), ReebType::QuasiRegular);
    }

    #[test]
    fn cone_json_shape() {
        let reg = PkCone::regular(vec![q(1, 2); 3]).unwrap();
        let v = serde_json::to_value(&reg).unwrap();
        assert_eq!(v["kind"], "regular");
        assert_eq!(v["gamma"], "1/4");
        assert_eq!(v["density"], 0.0625);
        assert_eq!(v["density_exact"], "1/16");
    }
}
