//! Spherical Bessel functions j_n, y_n.

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SphericalKind {
    J,
    Y,
}

/// Spherical Bessel function of the first (`J`) or second (`Y`) kind.
pub fn spherical_bessel(kind: SphericalKind, n: u32, x: f64) -> Result<f64> {
    match kind {
        SphericalKind::J => Ok(spherical_j(n, x)),
        SphericalKind::Y => spherical_y(n, x),
    }
}

/// j_n(x); j_n(0) = δ_{n0}.
pub fn spherical_j(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let ax = x.abs();
    let sign = if x < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
    sign * if ax < 0.5 + 0.5 * n as f64 {
        j_small(n, ax)
    } else if n <= 2 || (n as f64) < ax {
        j_upward(n, ax)
    } else {
        j_downward(n, ax)
    }
}

/// x^n/(2n+1)!! Σ_k (−x²/2)^k / (k! (2n+3)(2n+5)…(2n+2k+1)).
fn j_small(n: u32, x: f64) -> f64 {
    let mut lead = 1.0;
    for k in 0..n {
        lead *= x / (2 * k + 3) as f64;
    }
    // the loop above gives x^n / (3·5·…·(2n+1))
    let q = -0.5 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60u32 {
        term *= q / (k as f64 * (2 * n + 2 * k + 1) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    lead * sum
}

fn j_closed(x: f64) -> (f64, f64, f64) {
    let (s, c) = x.sin_cos();
    let j0 = s / x;
    let j1 = s / (x * x) - c / x;
    let j2 = (3.0 / (x * x * x) - 1.0 / x) * s - 3.0 * c / (x * x);
    (j0, j1, j2)
}

fn j_upward(n: u32, x: f64) -> f64 {
    let (j0, j1, j2) = j_closed(x);
    match n {
        0 => j0,
        1 => j1,
        2 => j2,
        _ => {
            let mut a = j1;
            let mut b = j2;
            for k in 2..n {
                let c = (2 * k + 1) as f64 / x * b - a;
                a = b;
                b = c;
            }
            b
        }
    }
}

/// Backward recurrence normalised against the closed form of j_0.
fn j_downward(n: u32, x: f64) -> f64 {
    let start = n + 20 + (2.0 * x) as u32 + (10.0 * (n as f64).sqrt()) as u32;
    let mut next = 0.0;
    let mut cur = 1e-300;
    let mut at_n = 0.0;
    for k in (1..=start).rev() {
        let prev = (2 * k + 1) as f64 / x * cur - next;
        next = cur;
        cur = prev;
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            at_n *= 1e-250;
        }
        if k - 1 == n {
            at_n = cur;
        }
    }
    // cur holds the unnormalised j_0
    let j0 = x.sin() / x;
    let j1 = j_closed(x).1;
    // use whichever seed is better conditioned
    if j0.abs() > j1.abs() {
        at_n * j0 / cur
    } else {
        at_n * j1 / next
    }
}

/// y_n(x) for x ≠ 0.
pub fn spherical_y(n: u32, x: f64) -> Result<f64> {
    if x == 0.0 || !x.is_finite() {
        return Err(domain("spherical_bessel", "y_n is singular at x = 0"));
    }
    let (s, c) = x.sin_cos();
    let y0 = -c / x;
    let y1 = -c / (x * x) - s / x;
    if n == 0 {
        return Ok(y0);
    }
    if n == 1 {
        return Ok(y1);
    }
    let y2 = (-3.0 / (x * x * x) + 1.0 / x) * c - 3.0 * s / (x * x);
    let mut a = y1;
    let mut b = y2;
    for k in 2..n {
        let next = (2 * k + 1) as f64 / x * b - a;
        a = b;
        b = next;
    }
    Ok(b)
}
