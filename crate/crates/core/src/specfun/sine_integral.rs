use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::quad::{gauss_kronrod_points, Estimate};

fn sinc(t: f64) -> f64 {
    if t.abs() < 1e-8 {
        1.0 - t * t / 6.0
    } else {
        t.sin() / t
    }
}

/// Integral sine Si(x) = ∫₀ˣ sin τ/τ dτ, by adaptive Gauss–Kronrod on
/// half-period panels.
pub fn integral_sine(x: f64) -> Result<f64> {
    Ok(integral_sine_eval(x)?.value)
}

pub fn integral_sine_eval(x: f64) -> Result<Estimate> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(domain("integral_sine", format!("needs finite x >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(Estimate {
            value: 0.0,
            abs_err: 0.0,
        });
    }
    let panels = (x / PI).ceil() as usize;
    let mut breaks: Vec<f64> = (0..panels).map(|k| k as f64 * PI).collect();
    breaks.push(x);
    breaks.dedup();
    Ok(gauss_kronrod_points(sinc, &breaks, 1e-13, 0.0))
}
