//! Quadrature rules: Gauss-Jacobi for algebraic endpoint singularities,
//! adaptive Gauss-Kronrod in one and two dimensions.
//!
//! The 2-D integrator refines in rounds. Within a round, regions are
//! evaluated in parallel but results are collected in region order and
//! summed sequentially, so the value does not depend on the thread count.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
}

/// Nodes and weights on `[0, 1]` for the weight `x^a (1 - x)^b`.
#[derive(Clone, Debug)]
pub struct JacobiRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl JacobiRule {
    /// `n`-point rule from the Golub-Welsch eigenproblem; `a, b > -1`.
    pub fn new(n: usize, a: f64, b: f64) -> Result<Self> {
        if n == 0 || !(a > -1.0) || !(b > -1.0) {
            return Err(Error::InvalidInput(format!("Jacobi rule n = {n}, a = {a}, b = {b}")));
        }
        // standard weight (1 - y)^al (1 + y)^be on [-1, 1], x = (1 + y) / 2
        let (al, be) = (b, a);
        let s = al + be;
        let mut jacobi = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            let k = i as f64;
            jacobi[(i, i)] = if i == 0 {
                (be - al) / (s + 2.0)
            } else {
                (be * be - al * al) / ((2.0 * k + s) * (2.0 * k + s + 2.0))
            };
            if i + 1 < n {
                let m = k + 1.0;
                let sq = if i == 0 {
                    4.0 * (1.0 + al) * (1.0 + be) / ((2.0 + s).powi(2) * (3.0 + s))
                } else {
                    4.0 * m * (m + al) * (m + be) * (m + s)
                        / ((2.0 * m + s).powi(2) * (2.0 * m + s + 1.0) * (2.0 * m + s - 1.0))
                };
                jacobi[(i, i + 1)] = sq.sqrt();
                jacobi[(i + 1, i)] = sq.sqrt();
            }
        }
        let ln_mu0 = (s + 1.0) * std::f64::consts::LN_2 + ln_gamma(al + 1.0) + ln_gamma(be + 1.0)
            - ln_gamma(s + 2.0);
        let scale = ln_mu0.exp() / 2f64.powf(s + 1.0);
        let eig = SymmetricEigen::new(jacobi);
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let v0 = eig.eigenvectors[(0, i)];
                ((1.0 + eig.eigenvalues[i]) / 2.0, scale * v0 * v0)
            })
            .collect();
        pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
        Ok(JacobiRule {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
        })
    }

    pub fn apply<F: Fn(f64) -> Complex64>(&self, f: F) -> Complex64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| f(x) * w).sum()
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights on the odd Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// The 15 Kronrod nodes on `[-1, 1]` with Kronrod and embedded Gauss weights.
fn gk15_table() -> [(f64, f64, f64); 15] {
    let mut table = [(0.0, 0.0, 0.0); 15];
    for i in 0..7 {
        let g = if i % 2 == 1 { WG[i / 2] } else { 0.0 };
        table[i] = (-XGK[i], WGK[i], g);
        table[14 - i] = (XGK[i], WGK[i], g);
    }
    table[7] = (0.0, WGK[7], WG[3]);
    table
}

fn gk15_interval<F: Fn(f64) -> Complex64>(f: &F, lo: f64, hi: f64) -> Estimate<Complex64> {
    let centre = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut kronrod = Complex64::new(0.0, 0.0);
    let mut gauss = Complex64::new(0.0, 0.0);
    for (x, wk, wg) in gk15_table() {
        let v = f(centre + half * x);
        kronrod += v * wk;
        gauss += v * wg;
    }
    Estimate { value: kronrod * half, error: ((kronrod - gauss) * half).norm() }
}

/// Globally adaptive GK15 on `[lo, hi]`, bisecting the interval with the
/// largest error until the total error is below `max(rel_tol |I|, abs_tol)`.
pub fn adaptive_gk15<F: Fn(f64) -> Complex64>(
    f: F,
    lo: f64,
    hi: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_intervals: usize,
) -> Result<Estimate<Complex64>> {
    let mut intervals = vec![(lo, hi, gk15_interval(&f, lo, hi))];
    loop {
        let value: Complex64 = intervals.iter().map(|i| i.2.value).sum();
        let error: f64 = intervals.iter().map(|i| i.2.error).sum();
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::NumericFailure { message: "integrand is not finite".into(), estimate: f64::INFINITY });
        }
        if error <= (rel_tol * value.norm()).max(abs_tol) {
            return Ok(Estimate { value, error });
        }
        if intervals.len() >= max_intervals {
            return Err(Error::NumericFailure {
                message: format!("adaptive quadrature hit {max_intervals} subintervals"),
                estimate: error,
            });
        }
        let worst = (0..intervals.len())
            .max_by(|&i, &j| intervals[i].2.error.total_cmp(&intervals[j].2.error))
            .expect("non-empty");
        let (a, b, _) = intervals[worst];
        let m = 0.5 * (a + b);
        intervals[worst] = (a, m, gk15_interval(&f, a, m));
        intervals.insert(worst + 1, (m, b, gk15_interval(&f, m, b)));
    }
}

const JACOBI_LOW: usize = 20;
const JACOBI_HIGH: usize = 40;
const MAX_DEPTH: usize = 60;

/// `int_0^1 x^a (1 - x)^b g(x) dx` for smooth `g`.
///
/// A fixed-order Gauss-Jacobi rule is tried first, with the error estimated
/// against a rule of half the order. If that fails, the interval is split in
/// half and each end is refined geometrically: the piece touching the
/// singular end keeps a Jacobi rule, the rest goes to adaptive GK15.
pub fn jacobi_integral<G: Fn(f64) -> Complex64>(
    g: G,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<Estimate<Complex64>> {
    let low = JacobiRule::new(JACOBI_LOW, a, b)?;
    let high = JacobiRule::new(JACOBI_HIGH, a, b)?;
    let coarse = low.apply(&g);
    let fine = high.apply(&g);
    let error = (fine - coarse).norm();
    if error <= tol * fine.norm() {
        return Ok(Estimate { value: fine, error });
    }
    let left = endpoint_piece(|x| g(x) * (1.0 - x).powf(b), a, 0.5, tol)?;
    let right = endpoint_piece(|x| g(1.0 - x) * (1.0 - x).powf(a), b, 0.5, tol)?;
    Ok(Estimate { value: left.value + right.value, error: left.error + right.error })
}

/// `int_0^h x^a f(x) dx`, shrinking the Jacobi piece by a factor 4 per step.
fn endpoint_piece<F: Fn(f64) -> Complex64>(f: F, a: f64, mut h: f64, tol: f64) -> Result<Estimate<Complex64>> {
    let low = JacobiRule::new(JACOBI_LOW, a, 0.0)?;
    let high = JacobiRule::new(JACOBI_HIGH, a, 0.0)?;
    let mut total = Estimate { value: Complex64::new(0.0, 0.0), error: 0.0 };
    for _ in 0..MAX_DEPTH {
        let scale = h.powf(a + 1.0);
        let coarse = low.apply(|y| f(h * y)) * scale;
        let fine = high.apply(|y| f(h * y)) * scale;
        let error = (fine - coarse).norm();
        if error <= tol * fine.norm() || error == 0.0 {
            total.value += fine;
            total.error += error;
            return Ok(total);
        }
        let outer = adaptive_gk15(|x| f(x) * x.powf(a), h / 4.0, h, tol, 0.0, 4000)?;
        total.value += outer.value;
        total.error += outer.error;
        h /= 4.0;
    }
    Err(Error::NumericFailure {
        message: "endpoint refinement did not converge".into(),
        estimate: total.error / total.value.norm().max(f64::MIN_POSITIVE),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    fn quarters(&self) -> [Rect; 4] {
        let xm = 0.5 * (self.x0 + self.x1);
        let ym = 0.5 * (self.y0 + self.y1);
        [
            Rect { x0: self.x0, x1: xm, y0: self.y0, y1: ym },
            Rect { x0: xm, x1: self.x1, y0: self.y0, y1: ym },
            Rect { x0: self.x0, x1: xm, y0: ym, y1: self.y1 },
            Rect { x0: xm, x1: self.x1, y0: ym, y1: self.y1 },
        ]
    }
}

fn gk15_rect<F: Fn(f64, f64) -> f64>(f: &F, r: &Rect) -> Estimate<f64> {
    let table = gk15_table();
    let (cx, hx) = (0.5 * (r.x0 + r.x1), 0.5 * (r.x1 - r.x0));
    let (cy, hy) = (0.5 * (r.y0 + r.y1), 0.5 * (r.y1 - r.y0));
    let mut kronrod = 0.0;
    let mut gauss = 0.0;
    for &(x, wkx, wgx) in &table {
        for &(y, wky, wgy) in &table {
            let v = f(cx + hx * x, cy + hy * y);
            kronrod += wkx * wky * v;
            gauss += wgx * wgy * v;
        }
    }
    let area = hx * hy;
    Estimate { value: kronrod * area, error: ((kronrod - gauss) * area).abs() }
}

/// Adaptive tensor GK15 over `rect`, splitting regions into quarters.
///
/// Each round refines every region whose error exceeds its share of the
/// remaining budget.
pub fn adaptive_2d<F: Fn(f64, f64) -> f64 + Sync>(
    f: F,
    rect: Rect,
    rel_tol: f64,
    abs_tol: f64,
    max_regions: usize,
) -> Result<Estimate<f64>> {
    let mut regions = vec![(rect, gk15_rect(&f, &rect))];
    loop {
        let value: f64 = regions.iter().map(|r| r.1.value).sum();
        let error: f64 = regions.iter().map(|r| r.1.error).sum();
        if !value.is_finite() {
            return Err(Error::NumericFailure { message: "integrand is not finite".into(), estimate: f64::INFINITY });
        }
        let target = (rel_tol * value.abs()).max(abs_tol);
        if error <= target {
            return Ok(Estimate { value, error });
        }
        if regions.len() >= max_regions {
            return Err(Error::NumericFailure {
                message: format!("2-D quadrature hit {max_regions} regions"),
                estimate: error / value.abs().max(f64::MIN_POSITIVE),
            });
        }
        let share = target / regions.len() as f64;
        let worst = regions.iter().map(|r| r.1.error).fold(0.0, f64::max);
        let cut = share.min(worst);
        let next: Vec<Vec<(Rect, Estimate<f64>)>> = regions
            .par_iter()
            .map(|(r, est)| {
                if est.error >= cut {
                    r.quarters().iter().map(|q| (*q, gk15_rect(&f, q))).collect()
                } else {
                    vec![(*r, *est)]
                }
            })
            .collect();
        regions = next.into_iter().flatten().collect();
    }
}
