//! Cylinder functions of integer order: J_m and the Neumann function N_m.

use std::f64::consts::{FRAC_2_PI, PI};

use super::SeriesEval;
use crate::error::{domain, Result};

/// Below this |x| the orders 0 and 1 use their power series.
pub const SERIES_SWITCH: f64 = 12.0;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Bessel function of the first kind J_m(x).
pub fn bessel_j(m: u32, x: f64) -> f64 {
    bessel_j_eval(m, x).value
}

/// J_m(x) with a bound on the truncation error of the route taken.
pub fn bessel_j_eval(m: u32, x: f64) -> SeriesEval {
    let sign = if x < 0.0 && m % 2 == 1 { -1.0 } else { 1.0 };
    let ax = x.abs();
    let (value, err) = j_nonneg(m, ax);
    SeriesEval {
        argument: x,
        order: m,
        value: sign * value,
        abs_error_bound: err,
    }
}

fn j_nonneg(m: u32, x: f64) -> (f64, f64) {
    if x == 0.0 {
        return (if m == 0 { 1.0 } else { 0.0 }, 0.0);
    }
    match m {
        0 | 1 if x < SERIES_SWITCH => j_series(m, x),
        0 | 1 => {
            let (j, _, err) = hankel_asymptotic(m, x);
            (j, err)
        }
        _ if (m as f64) < x => {
            // forward recurrence is stable while the order stays below x
            let (mut jm1, e0) = j_nonneg(0, x);
            let (mut jm, e1) = j_nonneg(1, x);
            for k in 1..m {
                let next = 2.0 * k as f64 / x * jm - jm1;
                jm1 = jm;
                jm = next;
            }
            (jm, (e0 + e1) * (m as f64) + 8.0 * f64::EPSILON)
        }
        _ => j_miller(m, x),
    }
}

/// Power series Σ (-1)^s (x/2)^{2s+m} / (s!(s+m)!).
fn j_series(m: u32, x: f64) -> (f64, f64) {
    let half = 0.5 * x;
    let q = -half * half;
    let mut term = 1.0;
    for k in 1..=m {
        term *= half / k as f64;
    }
    let mut sum = term;
    let mut peak = term.abs();
    let mut s = 0u32;
    loop {
        s += 1;
        term *= q / (s as f64 * (s + m) as f64);
        sum += term;
        peak = peak.max(term.abs());
        if term.abs() < 1e-17 * sum.abs().max(1e-300) && s > 2 {
            break;
        }
        if s > 300 {
            break;
        }
    }
    (sum, term.abs() + 4.0 * peak * f64::EPSILON * (s as f64).sqrt())
}

/// Miller's backward recurrence normalised by J_0 + 2 Σ J_{2k} = 1.
fn j_miller(m: u32, x: f64) -> (f64, f64) {
    let start = 2 * ((m.max(x as u32) + 20 + (40.0 * (m as f64 + x).sqrt()) as u32) / 2);
    let mut jp1 = 0.0;
    let mut j = 1e-300;
    let mut norm = 0.0;
    let mut result = 0.0;
    for k in (1..=start).rev() {
        let jm1 = 2.0 * k as f64 / x * j - jp1;
        jp1 = j;
        j = jm1;
        if j.abs() > 1e250 {
            j *= 1e-250;
            jp1 *= 1e-250;
            norm *= 1e-250;
            result *= 1e-250;
        }
        // j now holds J_{k-1}
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += 2.0 * j;
        }
        if k - 1 == m {
            result = j;
        }
    }
    norm += j;
    (result / norm, 16.0 * f64::EPSILON * (result / norm).abs().max(1e-300))
}

/// Large-argument Hankel expansion, truncated at its smallest term.
/// Returns (J_m, N_m, bound).
fn hankel_asymptotic(m: u32, x: f64) -> (f64, f64, f64) {
    let mu = 4.0 * (m as f64) * (m as f64);
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    let mut k = 1u32;
    loop {
        let kk = 2 * k - 1;
        let next = term * (mu - (kk as f64).powi(2)) / (k as f64 * 8.0 * x);
        if next.abs() >= last || next.abs() < 1e-17 || k > 60 {
            last = next.abs();
            break;
        }
        // a_k / x^k with alternating sign pattern for P and Q
        match k % 4 {
            1 => q += next,
            2 => p -= next,
            3 => q -= next,
            _ => p += next,
        }
        last = next.abs();
        term = next;
        k += 1;
    }
    let chi = x - (0.5 * m as f64 + 0.25) * PI;
    let amp = (FRAC_2_PI / x).sqrt();
    let (s, c) = chi.sin_cos();
    let j = amp * (p * c - q * s);
    let n = amp * (p * s + q * c);
    (j, n, amp * last + 4.0 * f64::EPSILON)
}

/// Derivative J_m'(x) via J_m' = (m/x)J_m − J_{m+1}; J_0' = −J_1.
pub fn bessel_j_prime(m: u32, x: f64) -> f64 {
    if m == 0 {
        return -bessel_j(1, x);
    }
    if x == 0.0 {
        return if m == 1 { 0.5 } else { 0.0 };
    }
    0.5 * (bessel_j(m - 1, x) - bessel_j(m + 1, x))
}

/// Neumann (Weber) function N_m(x), x > 0.
pub fn bessel_n(m: u32, x: f64) -> Result<f64> {
    Ok(bessel_n_eval(m, x)?.value)
}

pub fn bessel_n_eval(m: u32, x: f64) -> Result<SeriesEval> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain("bessel_n", format!("argument must be positive and finite, got {x}")));
    }
    let (n0, e0, n1, e1) = if x < SERIES_SWITCH {
        let (a, ea) = n0_series(x);
        let (b, eb) = n1_series(x);
        (a, ea, b, eb)
    } else {
        let (_, a, ea) = hankel_asymptotic(0, x);
        let (_, b, eb) = hankel_asymptotic(1, x);
        (a, ea, b, eb)
    };
    let (value, err) = match m {
        0 => (n0, e0),
        1 => (n1, e1),
        _ => {
            // N_{k+1} = (2k/x) N_k − N_{k−1}, stable upward
            let mut prev = n0;
            let mut cur = n1;
            let mut growth = 1.0f64;
            for k in 1..m {
                let next = 2.0 * k as f64 / x * cur - prev;
                prev = cur;
                cur = next;
                growth = growth.max((cur / n1.abs().max(1e-300)).abs());
            }
            (cur, (e0 + e1) * growth.max(1.0))
        }
    };
    Ok(SeriesEval {
        argument: x,
        order: m,
        value,
        abs_error_bound: err,
    })
}

/// N_0(x) = (2/π)[ln(x/2)+γ] J_0(x) + (2/π) Σ_{k≥1} (−1)^{k+1} H_k (x/2)^{2k}/(k!)².
fn n0_series(x: f64) -> (f64, f64) {
    let (j0, ej) = j_series(0, x);
    let half = 0.5 * x;
    let q = half * half;
    let mut term = 1.0;
    let mut harmonic = 0.0;
    let mut sum = 0.0;
    let mut peak = 0.0f64;
    let mut k = 0u32;
    loop {
        k += 1;
        term *= -q / (k as f64 * k as f64);
        harmonic += 1.0 / k as f64;
        let t = -term * harmonic;
        sum += t;
        peak = peak.max(t.abs());
        if t.abs() < 1e-17 * sum.abs().max(1e-300) && k > 2 {
            break;
        }
        if k > 300 {
            break;
        }
    }
    let log_part = (half.ln() + EULER_GAMMA) * j0;
    let v = FRAC_2_PI * (log_part + sum);
    (v, FRAC_2_PI * (ej * (half.ln() + EULER_GAMMA).abs() + 4.0 * peak * f64::EPSILON * (k as f64).sqrt()))
}

/// N_1(x) = (2/π) ln(x/2) J_1(x) − 2/(πx)
///          − (1/π) Σ_{k≥0} (−1)^k [ψ(k+1)+ψ(k+2)] (x/2)^{2k+1}/(k!(k+1)!).
fn n1_series(x: f64) -> (f64, f64) {
    let (j1, ej) = j_series(1, x);
    let half = 0.5 * x;
    let q = -half * half;
    let mut term = half; // k = 0 term of (x/2)^{2k+1}/(k!(k+1)!)
    // ψ(1) = −γ, ψ(2) = 1 − γ
    let mut psi_a = -EULER_GAMMA;
    let mut psi_b = 1.0 - EULER_GAMMA;
    let mut sum = term * (psi_a + psi_b);
    let mut peak = sum.abs();
    let mut k = 0u32;
    loop {
        k += 1;
        term *= q / (k as f64 * (k + 1) as f64);
        psi_a += 1.0 / k as f64;
        psi_b += 1.0 / (k + 1) as f64;
        let t = term * (psi_a + psi_b);
        sum += t;
        peak = peak.max(t.abs());
        if t.abs() < 1e-17 * sum.abs().max(1e-300) && k > 2 {
            break;
        }
        if k > 300 {
            break;
        }
    }
    let v = FRAC_2_PI * half.ln() * j1 - FRAC_2_PI / x - sum / PI;
    (v, FRAC_2_PI * ej * half.ln().abs() + 4.0 * peak * f64::EPSILON * (k as f64).sqrt())
}

/// N_m'(x) = (N_{m−1} − N_{m+1})/2, N_0' = −N_1.
pub fn bessel_n_prime(m: u32, x: f64) -> Result<f64> {
    if m == 0 {
        return Ok(-bessel_n(1, x)?);
    }
    Ok(0.5 * (bessel_n(m - 1, x)? - bessel_n(m + 1, x)?))
}
