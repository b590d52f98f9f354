//! Linear analysis on model cones: indicial roots in real dimension 4, the
//! radial mode equation, particular solutions for Fourier modes on the 2-D
//! cone `C_beta`, and the exponents of the Green's function expansion.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndicialPair {
    pub lambda: Scalar,
    pub delta_plus: Scalar,
    pub delta_minus: Scalar,
}

/// Solutions `delta_+ >= 0 >= -2 >= delta_-` of `delta (delta + 2) = lambda`,
/// exact when `1 + lambda` is the square of a rational.
pub fn indicial_roots(lambda: &Scalar) -> Result<IndicialPair> {
    if lambda.is_negative() || !lambda.to_f64().is_finite() {
        return Err(Error::InvalidEigenvalue(format!("lambda = {lambda} must be >= 0")));
    }
    let root = (Scalar::one() + lambda).sqrt();
    let delta_plus = &root - Scalar::one();
    let delta_minus = Scalar::int(-2) - &delta_plus;
    Ok(IndicialPair { lambda: lambda.clone(), delta_plus, delta_minus })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LambdaOfDelta {
    pub lambda: Scalar,
    /// `-2 < delta < 0`: no non-negative eigenvalue corresponds.
    pub below_spectrum: bool,
}

/// `delta (delta + 2)`.
pub fn lambda_of_delta(delta: &Scalar) -> LambdaOfDelta {
    let lambda = delta * &(delta + Scalar::int(2));
    let below_spectrum = lambda.is_negative();
    LambdaOfDelta { lambda, below_spectrum }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadialProfile {
    pub r: Vec<f64>,
    pub u: Vec<f64>,
    /// Spread `(r1 / r0)^{2 sqrt(1 + lambda)}` of the homogeneous solutions.
    pub condition: f64,
}

const MAX_CONDITION: f64 = 1e12;

/// Solves `u'' + (3/r) u' - (lambda / r^2) u = f(r)` on `[r0, r1]` with
/// `u(r0) = u0`, `u(r1) = u1` on `n` intervals equally spaced in `log r`.
///
/// With `t = log r` and `u = e^{-t} w` the equation becomes
/// `w'' = (1 + lambda) w + e^{3t} f`, which is discretized by Numerov's
/// fourth-order scheme and solved as a tridiagonal system.
pub fn radial_solve<F: Fn(f64) -> f64>(
    lambda: f64,
    r0: f64,
    r1: f64,
    u0: f64,
    u1: f64,
    source: F,
    n: usize,
) -> Result<RadialProfile> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidEigenvalue(format!("lambda = {lambda} must be >= 0")));
    }
    if !(r0 > 0.0 && r0 < r1 && r1.is_finite()) || n < 2 {
        return Err(Error::InvalidInput(format!("radial interval [{r0}, {r1}] with {n} steps")));
    }
    let (t0, t1) = (r0.ln(), r1.ln());
    let k2 = 1.0 + lambda;
    let condition = (2.0 * k2.sqrt() * (t1 - t0)).exp();
    if !(condition <= MAX_CONDITION) {
        return Err(Error::NumericFailure {
            message: "homogeneous solutions are too far apart in size".into(),
            estimate: condition,
        });
    }
    let h = (t1 - t0) / n as f64;
    let t: Vec<f64> = (0..=n).map(|i| if i == n { t1 } else { t0 + h * i as f64 }).collect();
    let s: Vec<f64> = t.iter().map(|&ti| (3.0 * ti).exp() * source(ti.exp())).collect();
    let c = h * h / 12.0;
    let w0 = u0 * r0;
    let w1 = u1 * r1;
    // (1 - c k2) w_{i-1} - (2 + 10 c k2) w_i + (1 - c k2) w_{i+1} = c (s_{i-1} + 10 s_i + s_{i+1})
    let off = 1.0 - c * k2;
    let diag = -(2.0 + 10.0 * c * k2);
    let m = n - 1;
    let mut rhs: Vec<f64> = (1..n).map(|i| c * (s[i - 1] + 10.0 * s[i] + s[i + 1])).collect();
    rhs[0] -= off * w0;
    rhs[m - 1] -= off * w1;
    let mut w = thomas(off, diag, &rhs);
    w.insert(0, w0);
    w.push(w1);
    let r: Vec<f64> = t.iter().map(|ti| ti.exp()).collect();
    let mut u: Vec<f64> = w.iter().zip(&r).map(|(wi, ri)| wi / ri).collect();
    u[0] = u0;
    u[n] = u1;
    let mut r = r;
    r[0] = r0;
    r[n] = r1;
    Ok(RadialProfile { r, u, condition })
}

/// Constant-coefficient tridiagonal solve.
fn thomas(off: f64, diag: f64, rhs: &[f64]) -> Vec<f64> {
    let m = rhs.len();
    let mut cp = vec![0.0; m];
    let mut dp = vec![0.0; m];
    cp[0] = off / diag;
    dp[0] = rhs[0] / diag;
    for i in 1..m {
        let denom = diag - off * cp[i - 1];
        cp[i] = off / denom;
        dp[i] = (rhs[i] - off * dp[i - 1]) / denom;
    }
    let mut x = vec![0.0; m];
    x[m - 1] = dp[m - 1];
    for i in (0..m - 1).rev() {
        x[i] = dp[i] - cp[i] * x[i + 1];
    }
    x
}

/// Source `rho^s cos(k theta)` for `Delta = d_rho^2 + rho^{-1} d_rho +
/// (beta rho)^{-2} d_theta^2` on `C_beta`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModeProblem {
    pub beta: Scalar,
    pub k: u64,
    pub s: Scalar,
}

/// Particular solution `c rho^{s+2} cos(k theta)`, times `log rho` when
/// resonant.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModeSolution {
    pub exponent: Scalar,
    pub coefficient: Scalar,
    pub resonant: bool,
}

pub fn mode_solution_2d(p: &ModeProblem) -> Result<ModeSolution> {
    if !(p.beta.is_positive() && p.beta <= Scalar::one()) {
        return Err(Error::InvalidInput(format!("beta = {} outside (0, 1]", p.beta)));
    }
    let exponent = &p.s + Scalar::int(2);
    if !exponent.is_positive() {
        return Err(Error::InvalidMode(format!("source exponent s = {} must exceed -2", p.s)));
    }
    let freq = Scalar::int(p.k as i64) / &p.beta;
    let gap = &exponent * &exponent - &freq * &freq;
    if gap.is_zero() {
        let coefficient = Scalar::one() / (Scalar::int(2) * &exponent);
        return Ok(ModeSolution { exponent, coefficient, resonant: true });
    }
    Ok(ModeSolution { exponent, coefficient: Scalar::one() / gap, resonant: false })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GreensExponent {
    pub exponent: Scalar,
    pub j: u64,
    pub k: u64,
}

/// `{k / beta + 2 j}` for `j <= j_max`, `k <= k_max`, sorted by value and
/// then by `(j, k)`.
pub fn greens_exponents(beta: &Scalar, j_max: u64, k_max: u64) -> Result<Vec<GreensExponent>> {
    if !(beta.is_positive() && *beta <= Scalar::one()) {
        return Err(Error::InvalidInput(format!("beta = {beta} outside (0, 1]")));
    }
    let mut out = Vec::with_capacity(((j_max + 1) * (k_max + 1)) as usize);
    for j in 0..=j_max {
        for k in 0..=k_max {
            let exponent = Scalar::int(k as i64) / beta + Scalar::int(2 * j as i64);
            out.push(GreensExponent { exponent, j, k });
        }
    }
    out.sort_by(|a, b| {
        a.exponent
            .partial_cmp(&b.exponent)
            .expect("finite exponents")
            .then((a.j, a.k).cmp(&(b.j, b.k)))
    });
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "operator", rename_all = "kebab-case")]
pub enum ConeOperator {
    /// `d_r^2 + (3/r) d_r` on functions of the radius of a 4-D cone.
    Radial4d,
    /// `d_rho^2 + rho^{-1} d_rho + (beta rho)^{-2} d_theta^2` on `C_beta`.
    Cone2d { beta: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingCheck {
    /// `max |Delta(u_l) - l^2 (Delta u)_l|` over the grid, where
    /// `u_l(x) = u(l x)`.
    pub max_residual: f64,
    /// Finite-difference error estimate of the left side.
    pub bound: f64,
    pub points: usize,
}

fn d2(f: [f64; 5], h: f64) -> f64 {
    (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h)
}

fn d1(f: [f64; 5], h: f64) -> f64 {
    (f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * h)
}

/// Fourth-order finite-difference Laplacian at `(r, theta)` with steps `h`
/// in `log r` and `k` in `theta`.
fn fd_laplacian<U: Fn(f64, f64) -> f64>(op: ConeOperator, u: &U, r: f64, theta: f64, h: f64, k: f64) -> f64 {
    let radial: [f64; 5] = std::array::from_fn(|i| u(r * (h * (i as f64 - 2.0)).exp(), theta));
    // with t = log r: d_r^2 = r^{-2} (d_t^2 - d_t), d_r = r^{-1} d_t
    let (tt, t) = (d2(radial, h), d1(radial, h));
    match op {
        ConeOperator::Radial4d => (tt + 2.0 * t) / (r * r),
        ConeOperator::Cone2d { beta } => {
            let angular: [f64; 5] = std::array::from_fn(|i| u(r, theta + k * (i as f64 - 2.0)));
            (tt + d2(angular, k) / (beta * beta)) / (r * r)
        }
    }
}

/// Checks `Delta(u_l) = l^2 (Delta u)_l` on the annulus `[r0, r1]` (times
/// the circle for the 2-D cone), on a grid geometric in `r`.
///
/// The left side is differenced with steps `(h, k)` and the right side with
/// `(h/2, k/2)`, so the residual measures the discretization error; `bound`
/// is twice the change of the left side under that halving.
pub fn scaling_identity_check<U: Fn(f64, f64) -> f64>(
    op: ConeOperator,
    u: U,
    r0: f64,
    r1: f64,
    n_r: usize,
    n_theta: usize,
    lambda: f64,
) -> Result<ScalingCheck> {
    if !(r0 > 0.0 && r0 < r1) || n_r < 1 || n_theta < 1 || !(lambda > 0.0) {
        return Err(Error::InvalidInput("scaling check needs 0 < r0 < r1, n >= 1, lambda > 0".into()));
    }
    if let ConeOperator::Cone2d { beta } = op {
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(Error::InvalidInput(format!("beta = {beta} outside (0, 1]")));
        }
    }
    let h = (r1 / r0).ln() / n_r as f64;
    let k = 2.0 * PI / n_theta as f64;
    let scaled = |r: f64, th: f64| u(lambda * r, th);
    let thetas: Vec<f64> = match op {
        ConeOperator::Radial4d => vec![0.0],
        ConeOperator::Cone2d { .. } => (0..n_theta).map(|j| k * j as f64).collect(),
    };
    let mut max_residual: f64 = 0.0;
    let mut bound: f64 = 0.0;
    let mut points = 0;
    for i in 0..=n_r {
        let r = r0 * (h * i as f64).exp();
        for &th in &thetas {
            let lhs = fd_laplacian(op, &scaled, r, th, h, k);
            let finer = fd_laplacian(op, &scaled, r, th, h / 2.0, k / 2.0);
            let rhs = lambda * lambda * fd_laplacian(op, &u, lambda * r, th, h / 2.0, k / 2.0);
            max_residual = max_residual.max((lhs - rhs).abs());
            bound = bound.max(2.0 * (lhs - finer).abs());
            points += 1;
        }
    }
    Ok(ScalingCheck { max_residual, bound, points })
}
