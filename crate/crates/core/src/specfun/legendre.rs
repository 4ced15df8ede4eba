//! Legendre functions P_n, Q_n and associated functions P_n^m.

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LegendreKind {
    P,
    Q,
}

pub fn legendre(kind: LegendreKind, n: u32, x: f64) -> Result<f64> {
    match kind {
        LegendreKind::P => legendre_p(n, x),
        LegendreKind::Q => legendre_q(n, x),
    }
}

/// P_n(x) by the three-term recurrence.
pub fn legendre_p(n: u32, x: f64) -> Result<f64> {
    if !(x.abs() <= 1.0) {
        return Err(domain("legendre", format!("P_n needs |x| <= 1, got {x}")));
    }
    Ok(p_unchecked(n, x))
}

pub(crate) fn p_unchecked(n: u32, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Q_n(x) for |x| < 1, seeded by Q_0 = ½ ln((1+x)/(1−x)) and Q_1 = x Q_0 − 1.
pub fn legendre_q(n: u32, x: f64) -> Result<f64> {
    if !(x.abs() < 1.0) {
        return Err(domain("legendre", format!("Q_n diverges at |x| >= 1, got {x}")));
    }
    let q0 = x.atanh();
    if n == 0 {
        return Ok(q0);
    }
    let mut a = q0;
    let mut b = x * q0 - 1.0;
    for k in 1..n {
        let kf = k as f64;
        let c = ((2.0 * kf + 1.0) * x * b - kf * a) / (kf + 1.0);
        a = b;
        b = c;
    }
    Ok(b)
}

/// P_n^m(x) = (1−x²)^{m/2} dᵐP_n/dxᵐ (no Condon–Shortley phase).
/// Returns 0 for m > n.
pub fn assoc_legendre(n: u32, m: u32, x: f64) -> Result<f64> {
    if !(x.abs() <= 1.0) {
        return Err(domain("assoc_legendre", format!("needs |x| <= 1, got {x}")));
    }
    if m > n {
        return Ok(0.0);
    }
    // P_m^m = (2m−1)!! (1−x²)^{m/2}
    let s = ((1.0 - x) * (1.0 + x)).sqrt();
    let mut pmm = 1.0;
    for k in 1..=m {
        pmm *= (2 * k - 1) as f64 * s;
    }
    if n == m {
        return Ok(pmm);
    }
    let mut a = pmm;
    let mut b = x * (2 * m + 1) as f64 * pmm;
    for k in (m + 1)..n {
        let c = ((2 * k + 1) as f64 * x * b - (k + m) as f64 * a) / (k - m + 1) as f64;
        a = b;
        b = c;
    }
    Ok(b)
}

/// ∫₋₁¹ [P_n^m]² dx = 2(n+m)!/((2n+1)(n−m)!).
pub fn assoc_legendre_norm_sq(n: u32, m: u32) -> f64 {
    let mut ratio = 1.0;
    for k in (n - m + 1)..=(n + m) {
        ratio *= k as f64;
    }
    2.0 * ratio / (2 * n + 1) as f64
}
