//! Scalar maximization and differentiation helpers.

use crate::error::{Error, Result};

/// Outcome of [`golden_max`].
#[derive(Clone, Copy, Debug)]
pub struct ScalarMaxResult {
    pub argmax: f64,
    pub maximum: f64,
    pub evaluations: usize,
}

const GRID_SAMPLES: usize = 64;
const INV_PHI: f64 = 0.618_033_988_749_894_9; // (sqrt(5) - 1) / 2

/// Maximizes `f` on `[lo, hi]` to an argument tolerance `tol`.
///
/// A 64-point grid scan picks the bracket first, so `f` only needs to be
/// unimodal near its global maximum rather than on the whole interval.
/// Non-finite samples (log endpoints and the like) are treated as -inf.
pub fn golden_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<ScalarMaxResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "golden_max tolerance must be positive, got {tol}"
        )));
    }
    if !(lo < hi) {
        return Err(Error::InvalidArgument(format!(
            "golden_max needs lo < hi, got [{lo}, {hi}]"
        )));
    }
    let mut evaluations = 0usize;
    let mut eval = |x: f64| {
        evaluations += 1;
        let y = f(x);
        if y.is_finite() {
            y
        } else {
            f64::NEG_INFINITY
        }
    };

    let step = (hi - lo) / (GRID_SAMPLES - 1) as f64;
    let mut best_idx = 0;
    let mut best_val = f64::NEG_INFINITY;
    for i in 0..GRID_SAMPLES {
        let x = lo + step * i as f64;
        let y = eval(x);
        if y > best_val {
            best_val = y;
            best_idx = i;
        }
    }
    let mut a = lo + step * best_idx.saturating_sub(1) as f64;
    let mut b = (lo + step * (best_idx + 1) as f64).min(hi);

    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = eval(x1);
    let mut f2 = eval(x2);
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = eval(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = eval(x1);
        }
    }

    let argmax = 0.5 * (a + b);
    let maximum = eval(argmax);
    Ok(ScalarMaxResult {
        argmax,
        maximum,
        evaluations,
    })
}

/// Symmetric difference quotient `(f(t+h) - f(t-h)) / (2h)`.
pub fn central_diff(f: impl Fn(f64) -> f64, t: f64, h: f64) -> f64 {
    assert!(h > 0.0, "central_diff step must be positive");
    (f(t + h) - f(t - h)) / (2.0 * h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_parabola_vertex() {
        let r = golden_max(|x| 1.0 - (x - 0.3) * (x - 0.3), -1.0, 1.0, 1e-10).unwrap();
        assert!((r.argmax - 0.3).abs() < 1e-7);
        assert!((r.maximum - 1.0).abs() < 1e-12);
        assert!(r.evaluations >= GRID_SAMPLES);
    }

    #[test]
    fn survives_infinite_endpoint() {
        // ln diverges at 0; the grid treats it as -inf and moves on.
        let r = golden_max(|x| x.ln() - x, 0.0, 4.0, 1e-9).unwrap();
        assert!((r.argmax - 1.0).abs() < 1e-6);
    }

    #[test]
    fn rejects_bad_tolerance_and_interval() {
        assert!(golden_max(|x| x, 0.0, 1.0, 0.0).is_err());
        assert!(golden_max(|x| x, 1.0, 0.0, 1e-6).is_err());
    }

    #[test]
    fn central_diff_matches_cosine() {
        let d = central_diff(f64::sin, 0.4, 1e-5);
        assert!((d - f64::cos(0.4)).abs() < 1e-9);
    }
}
