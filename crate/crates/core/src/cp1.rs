//! Flat conical metrics `prod |xi - a_j|^{2 beta_j - 2} |d xi|^2` on the
//! projective line: regimes, area, Schwarz-Christoffel periods and polygons.
//!
//! Metrics are reported at the raw scale of the formula; only ratios and
//! scaling laws are meaningful.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::quadrature::{adaptive_2d, jacobi_integral, Estimate, Rect};
use crate::scalar::Scalar;

/// Minimal path clearance, relative to the configuration diameter.
pub const CLEARANCE_FACTOR: f64 = 1e-8;
const MAX_REGIONS: usize = 200_000;

#[derive(Clone, Debug, PartialEq)]
pub struct PointConfig {
    points: Vec<Complex64>,
    betas: Vec<Scalar>,
}

impl PointConfig {
    pub fn new(points: Vec<Complex64>, betas: Vec<Scalar>) -> Result<Self> {
        if points.len() != betas.len() || points.is_empty() {
            return Err(Error::InvalidInput(format!(
                "{} points with {} weights",
                points.len(),
                betas.len()
            )));
        }
        for (i, b) in betas.iter().enumerate() {
            if !(b.is_positive() && *b < Scalar::one()) {
                return Err(Error::WeightOutOfRange { index: i, value: b.to_string() });
            }
        }
        for (i, p) in points.iter().enumerate() {
            if !p.re.is_finite() || !p.im.is_finite() {
                return Err(Error::InvalidInput(format!("point {i} is not finite")));
            }
            if points[..i].contains(p) {
                return Err(Error::InvalidInput(format!("point {i} repeats {p}")));
            }
        }
        Ok(PointConfig { points, betas })
    }

    pub fn real(points: &[f64], betas: Vec<Scalar>) -> Result<Self> {
        Self::new(points.iter().map(|&x| Complex64::new(x, 0.0)).collect(), betas)
    }

    /// Parses `{"points": [["re", "im"], ...], "betas": [...]}`. Coordinates
    /// and weights may be numbers or rational strings; a bare coordinate is
    /// a real point.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let field = |name: &str| -> Result<&Vec<Value>> {
            doc.get(name)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse(format!("missing array `{name}`")))
        };
        let coordinate = |v: &Value| -> Result<f64> {
            let s: Scalar = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
            Ok(s.to_f64())
        };
        let points = field("points")?
            .iter()
            .map(|p| match p {
                Value::Array(pair) if pair.len() == 2 => {
                    Ok(Complex64::new(coordinate(&pair[0])?, coordinate(&pair[1])?))
                }
                Value::Array(_) => Err(Error::Parse("a point is a pair [re, im]".into())),
                other => Ok(Complex64::new(coordinate(other)?, 0.0)),
            })
            .collect::<Result<Vec<_>>>()?;
        let betas = field("betas")?
            .iter()
            .map(|v| serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string())))
            .collect::<Result<Vec<Scalar>>>()?;
        Self::new(points, betas)
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn betas(&self) -> &[Scalar] {
        &self.betas
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn betas_f64(&self) -> Vec<f64> {
        self.betas.iter().map(Scalar::to_f64).collect()
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, p) in self.points.iter().enumerate() {
            for q in &self.points[i + 1..] {
                d = d.max((p - q).norm());
            }
        }
        d
    }

    /// The configuration `{lambda a_j}`.
    pub fn scaled(&self, lambda: Complex64) -> Result<Self> {
        Self::new(self.points.iter().map(|p| p * lambda).collect(), self.betas.clone())
    }

    /// Moves point `index` to `to`.
    pub fn with_point(&self, index: usize, to: Complex64) -> Result<Self> {
        let mut points = self.points.clone();
        let slot = points
            .get_mut(index)
            .ok_or_else(|| Error::InvalidInput(format!("no point {index}")))?;
        *slot = to;
        Self::new(points, self.betas.clone())
    }

    fn is_real(&self) -> bool {
        self.points.iter().all(|p| p.im == 0.0)
    }

    /// `s = sum (1 - beta_j)`.
    pub fn total_weight(&self) -> Scalar {
        self.betas.iter().map(|b| Scalar::one() - b).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "regime", rename_all = "kebab-case")]
pub enum Regime {
    ClosedFlat,
    AsymptoticCone { gamma: Scalar },
    Cylinder,
    ClosedWithAngleAtInfinity { beta_infinity: Scalar },
}

/// Float weights are compared with the walls `s = 1, 2` to this tolerance.
const FLOAT_WALL_TOLERANCE: f64 = 1e-12;

fn same(s: &Scalar, wall: i64) -> bool {
    if s.is_exact() {
        *s == Scalar::int(wall)
    } else {
        (s.to_f64() - wall as f64).abs() <= FLOAT_WALL_TOLERANCE
    }
}

/// Regime of the metric by `s = sum (1 - beta_j)`: closed flat at `s = 2`,
/// asymptotic to `C_{1-s}` for `s < 1`, a cylinder at `s = 1`, and a cone
/// point of angle `2 pi (s - 1)` at infinity for `1 < s < 2`.
pub fn classify_regime(cfg: &PointConfig) -> Result<Regime> {
    let s = cfg.total_weight();
    if same(&s, 2) {
        return Ok(Regime::ClosedFlat);
    }
    if same(&s, 1) {
        return Ok(Regime::Cylinder);
    }
    if s > Scalar::int(2) {
        return Err(Error::OutOfModel(format!("sum of (1 - beta) = {s} exceeds 2")));
    }
    if s < Scalar::one() {
        Ok(Regime::AsymptoticCone { gamma: Scalar::one() - s })
    } else {
        Ok(Regime::ClosedWithAngleAtInfinity { beta_infinity: s - Scalar::one() })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PeriodPath {
    pub from: usize,
    pub to: usize,
    /// Distance from the segment to the nearest other point.
    pub clearance: f64,
}

impl PeriodPath {
    pub fn new(cfg: &PointConfig, from: usize, to: usize) -> Result<Self> {
        let n = cfg.len();
        if from >= n || to >= n || from == to {
            return Err(Error::InvalidInput(format!("path {from} -> {to} in a {n}-point configuration")));
        }
        let (a, b) = (cfg.points[from], cfg.points[to]);
        let clearance = (0..n)
            .filter(|&k| k != from && k != to)
            .map(|k| segment_distance(cfg.points[k], a, b))
            .fold(f64::INFINITY, f64::min);
        let minimum = CLEARANCE_FACTOR * cfg.diameter();
        if clearance <= minimum {
            return Err(Error::PathTooClose { clearance, minimum });
        }
        Ok(PeriodPath { from, to, clearance })
    }
}

fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let t = (((p - a) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
    (p - (a + d * t)).norm()
}

/// `int Omega` along the straight segment from `a_from` to `a_to`, where
/// `Omega = prod (xi - a_k)^{beta_k - 1} d xi`.
///
/// Each factor uses the principal argument at the midpoint of the segment,
/// continued along it; for real points this is the boundary value from the
/// upper half-plane. The endpoint singularities go into a Jacobi weight.
pub fn period(cfg: &PointConfig, path: &PeriodPath, tol: f64) -> Result<Estimate<Complex64>> {
    check_tol(tol)?;
    let PeriodPath { from: i, to: j, .. } = *path;
    let betas = cfg.betas_f64();
    let (a, b) = (cfg.points[i], cfg.points[j]);
    let d = b - a;
    let mid = a + d * 0.5;
    let others: Vec<(Complex64, f64, Complex64)> = (0..cfg.len())
        .filter(|&k| k != i && k != j)
        .map(|k| (cfg.points[k], betas[k] - 1.0, mid - cfg.points[k]))
        .collect();
    let ends = (betas[i] - 1.0) * d.arg() + (betas[j] - 1.0) * (a - b).arg();
    let prefactor = d * d.norm().powf(betas[i] + betas[j] - 2.0) * Complex64::from_polar(1.0, ends);
    let g = |t: f64| {
        let xi = a + d * t;
        let mut log = Complex64::new(0.0, 0.0);
        for &(ak, e, at_mid) in &others {
            let z = xi - ak;
            let arg = at_mid.arg() + (z / at_mid).arg();
            log += Complex64::new(z.norm().ln(), arg) * e;
        }
        prefactor * log.exp()
    };
    jacobi_integral(g, betas[i] - 1.0, betas[j] - 1.0, tol)
}

/// Convenience wrapper building the path first.
pub fn period_between(cfg: &PointConfig, from: usize, to: usize, tol: f64) -> Result<Estimate<Complex64>> {
    period(cfg, &PeriodPath::new(cfg, from, to)?, tol)
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("tolerance {tol} must be positive")))
    }
}

/// Smooth step: 1 on `[0, 1/2]`, 0 on `[1, inf)`.
fn bump(t: f64) -> f64 {
    if t <= 0.5 {
        return 1.0;
    }
    if t >= 1.0 {
        return 0.0;
    }
    let x = 2.0 * t - 1.0;
    let f = |y: f64| if y <= 0.0 { 0.0 } else { (-1.0 / y).exp() };
    let (p, q) = (f(1.0 - x), f(x));
    p / (p + q)
}

/// `int_C prod |xi - a_j|^{2 beta_j - 2} dA` for a closed flat metric.
///
/// Smooth cut-offs split the plane into disks around each `a_j` (radius a
/// third of the distance to the nearest other point, polar coordinates with
/// `r^{2 beta_j}` as radial variable), a neighbourhood of infinity (after
/// `xi = 1/eta` the density is bounded), and a bounded remainder integrated
/// on a square.
pub fn area(cfg: &PointConfig, tol: f64) -> Result<Estimate<f64>> {
    check_tol(tol)?;
    let regime = classify_regime(cfg)?;
    if regime != Regime::ClosedFlat {
        return Err(Error::OutOfModel(format!("area needs a closed flat metric, got {regime:?}")));
    }
    let n = cfg.len();
    let pts = &cfg.points;
    let betas = cfg.betas_f64();
    let radii: Vec<f64> = (0..n)
        .map(|j| (0..n).filter(|&k| k != j).map(|k| (pts[j] - pts[k]).norm()).fold(f64::INFINITY, f64::min) / 3.0)
        .collect();
    let reach = (0..n).map(|j| pts[j].norm() + radii[j]).fold(0.0, f64::max);
    let big_r = 3.0 * reach;
    let density = |xi: Complex64| -> f64 {
        let mut log = 0.0;
        for k in 0..n {
            log += (2.0 * betas[k] - 2.0) * (xi - pts[k]).norm().ln();
        }
        log.exp()
    };
    let two_pi = 2.0 * PI;
    let mut pieces = Vec::with_capacity(n + 2);
    for j in 0..n {
        let (aj, bj, rj) = (pts[j], betas[j], radii[j]);
        let jac = rj.powf(2.0 * bj) / (2.0 * bj);
        let inner = |u: f64, theta: f64| -> f64 {
            let r = rj * u.powf(1.0 / (2.0 * bj));
            let xi = aj + Complex64::from_polar(r, theta);
            let mut log = 0.0;
            for k in (0..n).filter(|&k| k != j) {
                log += (2.0 * betas[k] - 2.0) * (xi - pts[k]).norm().ln();
            }
            jac * bump(r / rj) * log.exp()
        };
        let rect = Rect { x0: 0.0, x1: 1.0, y0: 0.0, y1: two_pi };
        pieces.push(adaptive_2d(inner, rect, tol, 0.0, MAX_REGIONS)?);
    }
    let far = |rho: f64, theta: f64| -> f64 {
        if rho == 0.0 {
            return 0.0;
        }
        let eta = Complex64::from_polar(rho, theta);
        let mut log = 0.0;
        for k in 0..n {
            log += (2.0 * betas[k] - 2.0) * (Complex64::new(1.0, 0.0) - pts[k] * eta).norm().ln();
        }
        rho * (1.0 - bump(1.0 / (rho * big_r))) * log.exp()
    };
    let rect = Rect { x0: 0.0, x1: 2.0 / big_r, y0: 0.0, y1: two_pi };
    pieces.push(adaptive_2d(far, rect, tol, 0.0, MAX_REGIONS)?);
    let middle = |x: f64, y: f64| -> f64 {
        let xi = Complex64::new(x, y);
        let mut cut = bump(xi.norm() / big_r);
        for k in 0..n {
            cut -= bump((xi - pts[k]).norm() / radii[k]);
        }
        if cut <= 0.0 {
            return 0.0;
        }
        cut * density(xi)
    };
    let square = Rect { x0: -big_r, x1: big_r, y0: -big_r, y1: big_r };
    pieces.push(adaptive_2d(middle, square, tol, 0.0, MAX_REGIONS)?);
    let value: f64 = pieces.iter().map(|p| p.value).sum();
    let error: f64 = pieces.iter().map(|p| p.error).sum();
    if error > tol * value.abs() {
        return Err(Error::NumericFailure {
            message: "area quadrature missed the tolerance".into(),
            estimate: error / value.abs(),
        });
    }
    Ok(Estimate { value, error })
}

/// Polygon traced by the Schwarz-Christoffel map of the upper half-plane.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScPolygon {
    /// `F(a_j)` with `F(a_1) = 0`.
    pub vertices: Vec<Complex64>,
    /// Quadrature error estimates of the side periods, the last entry for
    /// the side through infinity.
    pub side_errors: Vec<f64>,
    /// `|F(a_n) + int_{a_n}^{inf} Omega + int_{-inf}^{a_1} Omega|` divided by
    /// the polygon diameter.
    pub closure_defect: f64,
    /// Interior angles read off from the vertex turning.
    pub angles: Vec<f64>,
    pub shoelace_area: f64,
}

/// Polygon of a closed flat metric with real prevertices in increasing order.
pub fn sc_polygon(cfg: &PointConfig, tol: f64) -> Result<ScPolygon> {
    check_tol(tol)?;
    if !cfg.is_real() || !cfg.points.windows(2).all(|w| w[0].re < w[1].re) {
        return Err(Error::InvalidInput("prevertices must be real and increasing".into()));
    }
    if classify_regime(cfg)? != Regime::ClosedFlat {
        return Err(Error::OutOfModel("the polygon needs a closed flat metric".into()));
    }
    let n = cfg.len();
    let mut vertices = vec![Complex64::new(0.0, 0.0)];
    let mut side_errors = Vec::with_capacity(n);
    for j in 0..n - 1 {
        let p = period_between(cfg, j, j + 1, tol)?;
        vertices.push(vertices[j] + p.value);
        side_errors.push(p.error);
    }
    let (right, left) = tails(cfg, tol)?;
    side_errors.push(right.error + left.error);
    let back = vertices[n - 1] + right.value + left.value;
    let diameter = vertices
        .iter()
        .flat_map(|p| vertices.iter().map(move |q| (p - q).norm()))
        .fold(0.0, f64::max);
    let shoelace_area = shoelace(&vertices);
    Ok(ScPolygon {
        angles: interior_angles(&vertices),
        closure_defect: back.norm() / diameter,
        vertices,
        side_errors,
        shoelace_area,
    })
}

/// `int_{a_n}^{+inf} Omega` and `int_{-inf}^{a_1} Omega` along the real
/// axis, with `xi - a = t / (1 - t)`. At `s = 2` the transformed integrand
/// is smooth at `t = 1`.
fn tails(cfg: &PointConfig, tol: f64) -> Result<(Estimate<Complex64>, Estimate<Complex64>)> {
    let n = cfg.len();
    let betas = cfg.betas_f64();
    let pts: Vec<f64> = cfg.points.iter().map(|p| p.re).collect();
    let right = jacobi_integral(
        |t| {
            let mut log = 0.0;
            for k in 0..n - 1 {
                log += (betas[k] - 1.0) * ((pts[n - 1] - pts[k]) * (1.0 - t) + t).ln();
            }
            Complex64::new(log.exp(), 0.0)
        },
        betas[n - 1] - 1.0,
        0.0,
        tol,
    )?;
    // every factor is a negative real on the left ray: phase e^{i pi (beta - 1)}
    let phase: f64 = betas.iter().map(|b| PI * (b - 1.0)).sum();
    let left = jacobi_integral(
        |t| {
            let mut log = 0.0;
            for k in 1..n {
                log += (betas[k] - 1.0) * ((pts[k] - pts[0]) * (1.0 - t) + t).ln();
            }
            Complex64::from_polar(log.exp(), phase)
        },
        betas[0] - 1.0,
        0.0,
        tol,
    )?;
    Ok((right, left))
}

/// Unsigned area of a closed polygon.
pub fn shoelace(vertices: &[Complex64]) -> f64 {
    let n = vertices.len();
    let twice: f64 = (0..n).map(|i| (vertices[i].conj() * vertices[(i + 1) % n]).im).sum();
    0.5 * twice.abs()
}

/// Interior angles of a simple polygon in either orientation.
pub fn interior_angles(vertices: &[Complex64]) -> Vec<f64> {
    let n = vertices.len();
    let signed: f64 = (0..n).map(|i| (vertices[i].conj() * vertices[(i + 1) % n]).im).sum();
    let orientation = if signed >= 0.0 { 1.0 } else { -1.0 };
    (0..n)
        .map(|i| {
            let prev = vertices[(i + n - 1) % n];
            let next = vertices[(i + 1) % n];
            let turn = ((next - vertices[i]) / (vertices[i] - prev)).arg();
            PI - orientation * turn
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub step: usize,
    pub point: Complex64,
    pub area: Option<Estimate<f64>>,
    /// `|period|` between consecutive points; `None` when a path is too close.
    pub side_lengths: Vec<Option<f64>>,
}

/// Moves point `index` linearly from `from` to `to` in `steps` steps
/// (`steps + 1` rows) and records the area and consecutive periods.
pub fn sweep(
    cfg: &PointConfig,
    index: usize,
    from: Complex64,
    to: Complex64,
    steps: usize,
    tol: f64,
) -> Result<Vec<SweepRow>> {
    check_tol(tol)?;
    let closed = classify_regime(cfg)? == Regime::ClosedFlat;
    (0..=steps)
        .map(|step| {
            let t = if steps == 0 { 0.0 } else { step as f64 / steps as f64 };
            let point = from + (to - from) * t;
            let moved = cfg.with_point(index, point)?;
            let area = if closed { Some(area(&moved, tol)?) } else { None };
            let side_lengths = (0..moved.len() - 1)
                .map(|j| match period_between(&moved, j, j + 1, tol) {
                    Ok(p) => Ok(Some(p.value.norm())),
                    Err(Error::PathTooClose { .. }) => Ok(None),
                    Err(e) => Err(e),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(SweepRow { step, point, area, side_lengths })
        })
        .collect()
}
