//! Bracketed one-dimensional minimization.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    pub iterations: usize,
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for the minimum of a unimodal `f` on `[lo, hi]`,
/// stopping once the bracket is narrower than `xtol`.
pub fn golden_section<F: Fn(f64) -> f64>(
    f: F,
    mut lo: f64,
    mut hi: f64,
    xtol: f64,
    max_iter: usize,
) -> Result<Minimum> {
    if !(lo < hi) || !(xtol > 0.0) {
        return Err(Error::InvalidInput(format!("bad bracket [{lo}, {hi}] or tolerance {xtol}")));
    }
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iterations = 0;
    while hi - lo > xtol {
        if iterations == max_iter {
            return Err(Error::NumericFailure {
                message: "golden-section search did not converge".into(),
                estimate: hi - lo,
            });
        }
        iterations += 1;
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    let (x, value) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    // the true minimizer may sit on a bracket end
    let fl = f(lo);
    let fh = f(hi);
    let best = [(x, value), (lo, fl), (hi, fh)]
        .into_iter()
        .filter(|p| p.1.is_finite())
        .fold((x, value), |acc, p| if p.1 < acc.1 { p } else { acc });
    if !best.1.is_finite() {
        return Err(Error::NumericFailure {
            message: "objective is not finite on the bracket".into(),
            estimate: f64::INFINITY,
        });
    }
    Ok(Minimum { x: best.0, value: best.1, iterations })
}

/// Locates the sign change of an increasing `derivative` in `[lo, hi]` by
/// bisection. Returns the nearer end when the sign does not change.
pub fn bisect_derivative<D: Fn(f64) -> f64>(derivative: D, mut lo: f64, mut hi: f64) -> f64 {
    if derivative(lo) >= 0.0 {
        return lo;
    }
    if derivative(hi) <= 0.0 {
        return hi;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if derivative(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_interior_minimum() {
        let m = golden_section(|x| (x - 0.3).powi(2) + 1.0, -2.0, 5.0, 1e-10, 500).unwrap();
        assert!((m.x - 0.3).abs() < 1e-7);
        assert!((m.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn finds_boundary_minimum() {
        let m = golden_section(|x| x, 1.0, 2.0, 1e-12, 500).unwrap();
        assert_eq!(m.x, 1.0);
    }

    #[test]
    fn reports_non_convergence() {
        let r = golden_section(|x| x * x, -1.0, 1.0, 1e-12, 5);
        assert!(matches!(r, Err(Error::NumericFailure { .. })));
    }

    #[test]
    fn bisection_on_derivative() {
        let x = bisect_derivative(|x| 2.0 * (x - 0.7), 0.0, 1.0);
        assert!((x - 0.7).abs() < 1e-15);
        assert_eq!(bisect_derivative(|_| 1.0, 0.0, 1.0), 0.0);
        assert_eq!(bisect_derivative(|_| -1.0, 0.0, 1.0), 1.0);
    }
}
