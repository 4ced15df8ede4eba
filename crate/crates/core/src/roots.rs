//! Bracketed scalar root finding: secant steps guarded by bisection.

use crate::error::{Error, Result};

/// Stopping rule for [`bisect_secant`].
#[derive(Debug, Clone, Copy)]
pub struct RootTol {
    /// Accept once |f(x)| is at or below this.
    pub f_abs: f64,
    /// Accept once the bracket is narrower than this.
    pub x_abs: f64,
    pub max_iter: usize,
}

impl Default for RootTol {
    fn default() -> Self {
        Self {
            f_abs: 1e-10,
            x_abs: 1e-14,
            max_iter: 200,
        }
    }
}

/// Find a root of `f` in `[a, b]`, where `f(a)` and `f(b)` differ in sign.
///
/// Each step tries the secant through the two most recent iterates and falls
/// back to bisection whenever that point leaves the bracket or the bracket
/// failed to halve on the previous step.
pub fn bisect_secant<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: RootTol) -> Result<f64> {
    let (mut lo, mut hi) = if a < b { (a, b) } else { (b, a) };
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || !flo.is_finite() || !fhi.is_finite() {
        return Err(Error::Bracket { index: 0, lo, hi });
    }
    // previous two iterates for the secant
    let (mut x0, mut f0) = (lo, flo);
    let (mut x1, mut f1) = (hi, fhi);
    let mut width = hi - lo;
    let mut best = if flo.abs() < fhi.abs() { lo } else { hi };
    let mut best_f = flo.abs().min(fhi.abs());
    for _ in 0..tol.max_iter {
        let mut x = if f1 != f0 { x1 - f1 * (x1 - x0) / (f1 - f0) } else { f64::NAN };
        if !(x > lo && x < hi) || (hi - lo) > 0.5 * width {
            x = 0.5 * (lo + hi);
        }
        width = hi - lo;
        let fx = f(x);
        if fx.abs() < best_f {
            best = x;
            best_f = fx.abs();
        }
        if fx == 0.0 || fx.abs() <= tol.f_abs {
            return Ok(x);
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        x0 = x1;
        f0 = f1;
        x1 = x;
        f1 = fx;
        if hi - lo <= tol.x_abs.max(4.0 * f64::EPSILON * x.abs()) {
            return Ok(if best_f <= fx.abs() { best } else { x });
        }
    }
    let _ = flo;
    Ok(best)
}

/// Sub-intervals of `[a, b]` (split into `n` equal cells) on which `f` changes
/// sign, in increasing order.
pub fn scan_brackets<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> Vec<(f64, f64)> {
    let n = n.max(1);
    let h = (b - a) / n as f64;
    let mut out = Vec::new();
    let mut xp = a;
    let mut fp = f(a);
    for i in 1..=n {
        let x = if i == n { b } else { a + h * i as f64 };
        let fx = f(x);
        if fp == 0.0 {
            out.push((xp, xp));
        } else if fp.signum() != fx.signum() && fx != 0.0 && fp.is_finite() && fx.is_finite() {
            out.push((xp, x));
        }
        xp = x;
        fp = fx;
    }
    if fp == 0.0 {
        out.push((b, b));
    }
    out
}
