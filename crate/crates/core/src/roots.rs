//! Scalar root finding used by the model calibration and the threshold solver.

use crate::error::{Error, Result};

/// Plain bisection on `[lo, hi]`, which must bracket a sign change of `f`.
///
/// Stops when the bracket is narrower than `xtol` or `f` hits zero exactly.
/// Returns the midpoint of the final bracket.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, xtol: f64, max_iter: usize) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Bracket(format!(
            "no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}"
        )));
    }
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= xtol || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence(format!(
        "bisection did not reach width {xtol} in {max_iter} iterations"
    )))
}

/// Newton's method kept inside a bracket `[lo, hi]` with a sign change.
///
/// `f` returns `(value, derivative)`. A Newton step that leaves the current
/// bracket, or a vanishing derivative, falls back to bisection.
pub fn safeguarded_newton<F>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    x0: f64,
    xtol: f64,
    max_iter: usize,
) -> Result<f64>
where
    F: FnMut(f64) -> (f64, f64),
{
    let (f_lo, _) = f(lo);
    let (f_hi, _) = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Bracket(format!(
            "no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}"
        )));
    }
    let lo_sign = f_lo.signum();
    let mut x = if x0 > lo && x0 < hi { x0 } else { 0.5 * (lo + hi) };
    for _ in 0..max_iter {
        let (fx, dfx) = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == lo_sign {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - fx / dfx;
        let next = if dfx != 0.0 && newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let step = (next - x).abs();
        x = next;
        if step <= xtol * (1.0 + x.abs()) || hi - lo <= xtol * (1.0 + x.abs()) {
            return Ok(x);
        }
    }
    Err(Error::NoConvergence(format!(
        "safeguarded Newton did not converge in {max_iter} iterations"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt2() {
        let root = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14, 200).unwrap();
        assert!((root - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn bisect_rejects_missing_bracket() {
        assert!(matches!(
            bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12, 100),
            Err(Error::Bracket(_))
        ));
    }

    #[test]
    fn newton_falls_back_when_derivative_vanishes() {
        // f'(0) = 0 at the start point forces a bisection step.
        let root = safeguarded_newton(|x| (x.powi(3) - 0.5, 3.0 * x * x), -1.0, 2.0, 0.0, 1e-15, 200)
            .unwrap();
        assert!((root - 0.5f64.cbrt()).abs() < 1e-12);
    }
}
