//! Bracketing root finder shared by the crossover and fuzzy-boundary searches.

use crate::error::{Error, Result};

/// Iteration cap; halving an interval of width 2 below 1e-300 takes ~1000 steps.
const MAX_ITER: usize = 2000;

/// Finds a root of `f` on `[lo, hi]` by bisection.
///
/// `f(lo)` and `f(hi)` must have opposite signs (an endpoint that is exactly
/// zero is returned as is). Iteration stops once the bracket is narrower than
/// `abs_tol`; the midpoint of the final bracket is returned.
pub fn bisect<F>(mut f: F, lo: f64, hi: f64, abs_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(lo < hi) || !(abs_tol > 0.0) {
        return Err(Error::domain(format!(
            "bisect needs lo < hi and abs_tol > 0, got [{lo}, {hi}], tol {abs_tol}"
        )));
    }
    let (mut a, mut b) = (lo, hi);
    let fa = f(a)?;
    let fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::NoBracket { lo, hi });
    }
    let a_negative = fa < 0.0;
    for _ in 0..MAX_ITER {
        if b - a <= abs_tol {
            break;
        }
        let mid = a + 0.5 * (b - a);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == a_negative {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(a + 0.5 * (b - a))
}
