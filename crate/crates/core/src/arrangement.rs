//! Weighted line arrangements in the projective plane.
//!
//! Lines and points are kept in exact rational homogeneous coordinates,
//! normalized so that the first nonzero coordinate is 1. Two lines are equal
//! iff their normalized coefficient triples are identical, and multiple points
//! are found by intersecting every pair of lines exactly.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational};

type Triple = [BigRational; 3];

fn normalize(mut v: Triple) -> Option<Triple> {
    let lead = v.iter().find(|c| !c.is_zero())?.clone();
    for c in v.iter_mut() {
        *c = &*c / &lead;
    }
    Some(v)
}

fn cross(a: &Triple, b: &Triple) -> Triple {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn dot(a: &Triple, b: &Triple) -> BigRational {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

fn fmt_triple(v: &Triple, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(
        f,
        "[{} : {} : {}]",
        format_rational(&v[0]),
        format_rational(&v[1]),
        format_rational(&v[2])
    )
}

/// The line `{a x + b y + c z = 0}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjLine {
    coeffs: Triple,
}

impl ProjLine {
    pub fn new(a: BigRational, b: BigRational, c: BigRational) -> Result<Self> {
        normalize([a, b, c])
            .map(|coeffs| ProjLine { coeffs })
            .ok_or_else(|| Error::InvalidInput("line with all coefficients zero".into()))
    }

    /// Line from small integer coefficients.
    pub fn from_ints(a: i64, b: i64, c: i64) -> Result<Self> {
        let r = |n: i64| BigRational::from_integer(n.into());
        ProjLine::new(r(a), r(b), r(c))
    }

    pub fn coeffs(&self) -> &[BigRational; 3] {
        &self.coeffs
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        dot(&self.coeffs, &p.coords).is_zero()
    }

    /// Intersection point, or `None` when the lines coincide.
    pub fn meet(&self, other: &ProjLine) -> Option<ProjPoint> {
        normalize(cross(&self.coeffs, &other.coeffs)).map(|coords| ProjPoint { coords })
    }

    /// Image of the line under the projective map whose action on line
    /// coordinates is `coeffs -> coeffs · m` (row vector times matrix).
    pub fn transform(&self, m: &[[BigRational; 3]; 3]) -> Result<ProjLine> {
        let c = &self.coeffs;
        let col = |j: usize| &c[0] * &m[0][j] + &c[1] * &m[1][j] + &c[2] * &m[2][j];
        ProjLine::new(col(0), col(1), col(2))
    }
}

impl fmt::Display for ProjLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_triple(&self.coeffs, f)
    }
}

/// A point of the projective plane in normalized homogeneous coordinates.
/// The derived ordering is lexicographic on the normalized triple.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: Triple,
}

impl ProjPoint {
    pub fn coords(&self) -> &[BigRational; 3] {
        &self.coords
    }

    pub fn coord_strings(&self) -> [String; 3] {
        [
            format_rational(&self.coords[0]),
            format_rational(&self.coords[1]),
            format_rational(&self.coords[2]),
        ]
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_triple(&self.coords, f)
    }
}

/// A point where two or more lines of an arrangement meet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplePoint {
    pub location: ProjPoint,
    /// Indices of the lines through the point, ascending.
    pub incident: Vec<usize>,
}

impl MultiplePoint {
    pub fn multiplicity(&self) -> usize {
        self.incident.len()
    }
}

/// Lines with cone-angle weights `beta_j`, the angle along `L_j` being `2 pi beta_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedArrangement {
    lines: Vec<ProjLine>,
    betas: Vec<BigRational>,
}

/// Classification of one multiple point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointClass {
    /// klt and Troyanov: the tangent cone is the model PK cone.
    Stable,
    /// klt but not Troyanov: the tangent cone jumps.
    Jumped,
    NonKlt,
}

/// Sign of `3 - sum(1 - beta_j)`, i.e. of the first Chern class of the pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GlobalRegime {
    CalabiYau,
    Fano,
    GeneralType,
    /// Some point is not klt, so the pair has no log classification.
    None,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointReport {
    pub point: MultiplePoint,
    pub class: PointClass,
    pub klt: bool,
    pub troyanov: bool,
    /// Whether the link carries a spherical metric lifting to a regular cone;
    /// for double points this needs equal weights.
    pub spherical_liftable: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegimeReport {
    pub points: Vec<PointReport>,
    pub global: GlobalRegime,
    /// `sum_j (1 - beta_j)`.
    pub total_weight: BigRational,
}

impl WeightedArrangement {
    /// Builds an arrangement, rejecting repeated lines and weights outside (0, 1).
    /// Empty and single-line arrangements are allowed as degenerate anchors.
    pub fn new(lines: Vec<ProjLine>, betas: Vec<BigRational>) -> Result<Self> {
        if lines.len() != betas.len() {
            return Err(Error::InvalidInput(format!(
                "{} lines but {} weights",
                lines.len(),
                betas.len()
            )));
        }
        for (index, b) in betas.iter().enumerate() {
            if !b.is_positive() || b >= &BigRational::one() {
                return Err(Error::WeightOutOfRange { index, value: format_rational(b) });
            }
        }
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                if lines[i] == lines[j] {
                    return Err(Error::DuplicateLine { first: i, second: j });
                }
            }
        }
        Ok(WeightedArrangement { lines, betas })
    }

    pub fn lines(&self) -> &[ProjLine] {
        &self.lines
    }

    pub fn betas(&self) -> &[BigRational] {
        &self.betas
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// Parses the arrangement JSON document
    /// `{"lines":[{"coeffs":["a","b","c"]},...],"betas":["p/q",...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ArrangementDoc =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let lines = doc
            .lines
            .iter()
            .map(|l| {
                let [a, b, c] = &l.coeffs;
                ProjLine::new(parse_rational(a)?, parse_rational(b)?, parse_rational(c)?)
            })
            .collect::<Result<Vec<_>>>()?;
        let betas = doc.betas.iter().map(|b| parse_rational(b)).collect::<Result<Vec<_>>>()?;
        WeightedArrangement::new(lines, betas)
    }

    /// Canonical JSON form; parsing it back gives an equal arrangement.
    pub fn to_json(&self) -> String {
        let doc = ArrangementDoc {
            lines: self
                .lines
                .iter()
                .map(|l| LineDoc { coeffs: l.coeffs.clone().map(|c| format_rational(&c)) })
                .collect(),
            betas: self.betas.iter().map(format_rational).collect(),
        };
        serde_json::to_string(&doc).expect("arrangement serializes")
    }

    /// All points where at least two lines meet, sorted by normalized
    /// coordinates.
    pub fn multiple_points(&self) -> Vec<MultiplePoint> {
        let mut by_location: BTreeMap<ProjPoint, Vec<usize>> = BTreeMap::new();
        for i in 0..self.lines.len() {
            for j in i + 1..self.lines.len() {
                let p = self.lines[i].meet(&self.lines[j]).expect("lines are distinct");
                let entry = by_location.entry(p).or_default();
                for k in [i, j] {
                    if !entry.contains(&k) {
                        entry.push(k);
                    }
                }
            }
        }
        by_location
            .into_iter()
            .map(|(location, mut incident)| {
                incident.sort_unstable();
                MultiplePoint { location, incident }
            })
            .collect()
    }

    pub fn incident_betas<'a>(&'a self, point: &'a MultiplePoint) -> impl Iterator<Item = &'a BigRational> + 'a {
        point.incident.iter().map(move |&k| &self.betas[k])
    }

    /// `sum_j (1 - beta_j)`.
    pub fn total_weight(&self) -> BigRational {
        self.betas.iter().map(|b| BigRational::one() - b).fold(BigRational::zero(), |a, x| a + x)
    }

    /// Calabi-Yau condition: `sum_j (1 - beta_j) = 3`.
    pub fn is_calabi_yau(&self) -> bool {
        self.total_weight() == BigRational::from_integer(3.into())
    }

    /// Local integrability at a multiple point: `sum_k (1 - beta_k) < 2`.
    pub fn is_klt_at(&self, point: &MultiplePoint) -> bool {
        let s = self
            .incident_betas(point)
            .map(|b| BigRational::one() - b)
            .fold(BigRational::zero(), |a, x| a + x);
        s < BigRational::from_integer(2.into())
    }

    /// Troyanov conditions at a multiple point:
    /// `0 < 2 + sum(beta_k - 1) < 2 min beta_k` for `d >= 3`; double points
    /// always carry the product model and pass.
    pub fn is_troyanov_at(&self, point: &MultiplePoint) -> bool {
        if point.multiplicity() <= 2 {
            return true;
        }
        troyanov(self.incident_betas(point))
    }

    /// Like [`is_troyanov_at`](Self::is_troyanov_at) but double points need
    /// equal weights, as for the spherical metric with two cone points.
    pub fn is_spherical_liftable_at(&self, point: &MultiplePoint) -> bool {
        if point.multiplicity() == 2 {
            let b: Vec<_> = self.incident_betas(point).collect();
            return b[0] == b[1];
        }
        self.is_troyanov_at(point)
    }

    pub fn classify_point(&self, point: &MultiplePoint) -> PointClass {
        match (self.is_klt_at(point), self.is_troyanov_at(point)) {
            (false, _) => PointClass::NonKlt,
            (true, true) => PointClass::Stable,
            (true, false) => PointClass::Jumped,
        }
    }

    pub fn regime_report(&self) -> RegimeReport {
        let points: Vec<PointReport> = self
            .multiple_points()
            .into_iter()
            .map(|point| {
                let klt = self.is_klt_at(&point);
                let troyanov = self.is_troyanov_at(&point);
                let spherical_liftable = self.is_spherical_liftable_at(&point);
                let class = self.classify_point(&point);
                PointReport { point, class, klt, troyanov, spherical_liftable }
            })
            .collect();
        let total_weight = self.total_weight();
        let global = if points.iter().any(|p| !p.klt) {
            GlobalRegime::None
        } else {
            match (BigRational::from_integer(3.into()) - &total_weight).signum() {
                s if s.is_zero() => GlobalRegime::CalabiYau,
                s if s.is_positive() => GlobalRegime::Fano,
                _ => GlobalRegime::GeneralType,
            }
        };
        RegimeReport { points, global, total_weight }
    }
}

/// `0 < 2 + sum(beta - 1) < 2 min beta` for a list of weights.
pub(crate) fn troyanov<'a>(betas: impl Iterator<Item = &'a BigRational>) -> bool {
    let betas: Vec<&BigRational> = betas.collect();
    let two = BigRational::from_integer(2.into());
    let excess = betas.iter().fold(two.clone(), |acc, b| acc + *b - BigRational::one());
    let min = betas.iter().min().map(|b| (*b).clone()).unwrap_or_else(BigRational::zero);
    excess.is_positive() && excess < two * min
}

#[derive(Serialize, Deserialize)]
struct LineDoc {
    coeffs: [String; 3],
}

#[derive(Serialize, Deserialize)]
struct ArrangementDoc {
    lines: Vec<LineDoc>,
    betas: Vec<String>,
}

/// Named arrangements used throughout the tests and the guide.
pub mod examples {
    use super::*;
    use crate::scalar::rat;

    fn uniform(lines: Vec<ProjLine>, beta: BigRational) -> WeightedArrangement {
        let n = lines.len();
        WeightedArrangement::new(lines, vec![beta; n]).expect("valid example")
    }

    /// `x, y, z, x + y + z`: four lines in general position.
    pub fn generic_four(beta: BigRational) -> WeightedArrangement {
        let lines = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)]
            .iter()
            .map(|&(a, b, c)| ProjLine::from_ints(a, b, c).unwrap())
            .collect();
        uniform(lines, beta)
    }

    /// The six lines through pairs of the four points
    /// `[1:0:0], [0:1:0], [0:0:1], [1:1:1]`.
    pub fn complete_quadrilateral(beta: BigRational) -> WeightedArrangement {
        let lines = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, -1, 0), (0, 1, -1), (1, 0, -1)]
            .iter()
            .map(|&(a, b, c)| ProjLine::from_ints(a, b, c).unwrap())
            .collect();
        uniform(lines, beta)
    }

    /// Complete quadrilateral with weight 1/2 on every line.
    pub fn complete_quadrilateral_half() -> WeightedArrangement {
        complete_quadrilateral(rat(1, 2))
    }
}
