//! Euler–Bernoulli beams `EJ u_xxxx + ρ_V S u_tt = 0`: frequency equations,
//! mode shapes, free vibration and Euler buckling loads.
//!
//! With c² = EJ/(ρ_V S) the eigenfrequencies are ω_n = c μ_n²/l², where μ_n
//! are the positive roots of the end-condition equation. Mode shapes are
//! written in z = μx/l and evaluated without forming ch z or sh z, which
//! overflow for high modes.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::par::{self, Exec};
use crate::quad::gauss_kronrod_points;
use crate::roots::{bisect_secant, scan_brackets, RootTol};
use crate::specfun::{zero_table, ZeroFamily};

/// End conditions of the beam, left end first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BeamBc {
    ClampedClamped,
    ClampedFree,
    PinnedPinned,
    ClampedPinned,
    FreeFree,
}

impl BeamBc {
    pub const ALL: [BeamBc; 5] = [
        BeamBc::ClampedClamped,
        BeamBc::ClampedFree,
        BeamBc::PinnedPinned,
        BeamBc::ClampedPinned,
        BeamBc::FreeFree,
    ];

    /// Frequency equation in a form that stays O(1) for large μ.
    pub fn residual(self, mu: f64) -> f64 {
        match self {
            BeamBc::ClampedClamped | BeamBc::FreeFree => ZeroFamily::BeamClampedClamped.residual(0, mu),
            BeamBc::ClampedFree => ZeroFamily::BeamClampedFree.residual(0, mu),
            BeamBc::ClampedPinned => ZeroFamily::BeamClampedPinned.residual(0, mu),
            BeamBc::PinnedPinned => mu.sin(),
        }
    }

    /// Number of rigid-body modes (μ = 0).
    pub fn rigid_modes(self) -> usize {
        if self == BeamBc::FreeFree {
            2
        } else {
            0
        }
    }

    // signs (s1, s2) in k = (ch μ + s1 cos μ)/(sh μ + s2 sin μ) and the shape
    // sign s in X = (ch z + s cos z) − k(sh z + s sin z)
    fn signs(self) -> (f64, f64, f64) {
        match self {
            BeamBc::ClampedClamped | BeamBc::ClampedPinned => (-1.0, -1.0, -1.0),
            BeamBc::ClampedFree => (1.0, 1.0, -1.0),
            BeamBc::FreeFree => (-1.0, -1.0, 1.0),
            BeamBc::PinnedPinned => (0.0, 0.0, 0.0),
        }
    }
}

/// First `k_max` positive roots μ_n. For free–free the double root μ = 0
/// (rigid modes) is not included; see [`BeamBc::rigid_modes`].
pub fn beam_char_roots(bc: BeamBc, k_max: usize) -> Result<Vec<f64>> {
    if k_max == 0 {
        return Err(domain("beam_char_roots", "k_max must be at least 1"));
    }
    let family = match bc {
        BeamBc::PinnedPinned => return Ok((1..=k_max).map(|n| PI * n as f64).collect()),
        BeamBc::ClampedClamped | BeamBc::FreeFree => ZeroFamily::BeamClampedClamped,
        BeamBc::ClampedFree => ZeroFamily::BeamClampedFree,
        BeamBc::ClampedPinned => ZeroFamily::BeamClampedPinned,
    };
    let table = zero_table(family, 0, k_max)?;
    Ok(table.roots[..k_max].to_vec())
}

/// Unnormalised shape X(z) and its z-derivatives up to third order.
fn raw_shape(bc: BeamBc, mu: f64, z: f64) -> [f64; 4] {
    if bc == BeamBc::PinnedPinned {
        let (s, c) = z.sin_cos();
        return [s, c, -s, -c];
    }
    let (s1, s2, s) = bc.signs();
    let (sm, cm) = mu.sin_cos();
    let em = (-mu).exp();
    // D = sh μ + s2 sin μ = ½e^μ·dp, N = ch μ + s1 cos μ
    let dp = 1.0 - em * em + 2.0 * s2 * sm * em;
    let k = (1.0 + em * em + 2.0 * s1 * cm * em) / dp;
    // ch z − k sh z = ½e^z(1−k) + ½e^{−z}(1+k), with (1∓k) = (D∓N)/D
    let d_minus_n = -em + s2 * sm - s1 * cm;
    let d_plus_n_scaled = 1.0 + (s2 * sm + s1 * cm) * em; // (D+N)e^{−μ}
    let ep = (z - mu).exp() * d_minus_n / dp;
    let en = (-z).exp() * d_plus_n_scaled / dp;
    let h0 = ep + en;
    let h1 = ep - en;
    let (sz, cz) = z.sin_cos();
    // trig part s(cos z − k sin z)
    let t0 = s * (cz - k * sz);
    let t1 = s * (-sz - k * cz);
    [h0 + t0, h1 + t1, h0 - t0, h1 - t1]
}

/// ∫₀ˡ X² dx for the unnormalised shape, from the end values at z = μ:
/// (l/4)[X² − 2X′X‴ + X″²]. The boundary terms 3XX‴ − X′X″ at z = 0 and at
/// the right end vanish for clamped, pinned and free ends.
pub fn norm_identity(bc: BeamBc, mu: f64, l: f64) -> f64 {
    let [x, d1, d2, d3] = raw_shape(bc, mu, mu);
    0.25 * l * (x * x - 2.0 * d1 * d3 + d2 * d2)
}

/// Beam with its first modes.
#[derive(Debug, Clone)]
pub struct BeamSpectrum {
    pub bc: BeamBc,
    pub roots: Vec<f64>,
    /// c = √(EJ/ρ_V S).
    pub c: f64,
    pub l: f64,
    norms: Vec<f64>,
}

impl BeamSpectrum {
    pub fn new(bc: BeamBc, c: f64, l: f64, count: usize) -> Result<Self> {
        if !(c > 0.0 && l > 0.0) {
            return Err(Error::InvalidProblem(format!("need c > 0 and l > 0, got c={c}, l={l}")));
        }
        let roots = beam_char_roots(bc, count)?;
        let norms = roots.iter().map(|&mu| 1.0 / norm_identity(bc, mu, l).sqrt()).collect();
        Ok(Self { bc, roots, c, l, norms })
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// ω_n = c μ_n²/l².
    pub fn frequency(&self, n: usize) -> f64 {
        self.c * self.roots[n - 1].powi(2) / (self.l * self.l)
    }

    /// Normalised X_n(x) for the n-th elastic mode.
    pub fn mode(&self, n: usize, x: f64) -> f64 {
        let mu = self.roots[n - 1];
        self.norms[n - 1] * raw_shape(self.bc, mu, mu * x / self.l)[0]
    }

    /// d^k X_n/dx^k, k ≤ 3.
    pub fn mode_derivative(&self, n: usize, order: usize, x: f64) -> f64 {
        let mu = self.roots[n - 1];
        let d = raw_shape(self.bc, mu, mu * x / self.l)[order.min(3)];
        self.norms[n - 1] * d * (mu / self.l).powi(order.min(3) as i32)
    }

    /// Orthonormal rigid modes of the free–free beam, j ∈ {1, 2}.
    pub fn rigid_mode(&self, j: usize, x: f64) -> Option<f64> {
        if self.bc != BeamBc::FreeFree {
            return None;
        }
        let l = self.l;
        match j {
            1 => Some(1.0 / l.sqrt()),
            2 => Some(2.0 * 3f64.sqrt() / l.sqrt() * (x / l - 0.5)),
            _ => None,
        }
    }
}

/// Normalised mode shape for a beam of length l.
pub fn beam_mode(bc: BeamBc, n: usize, l: f64, x: f64) -> Result<f64> {
    if n == 0 {
        return Err(domain("beam_mode", "mode index is 1-based"));
    }
    if !(0.0..=l).contains(&x) {
        return Err(domain("beam_mode", format!("x = {x} outside [0, {l}]")));
    }
    let mu = beam_char_roots(bc, n)?[n - 1];
    Ok(raw_shape(bc, mu, mu * x / l)[0] / norm_identity(bc, mu, l).sqrt())
}

/// Free vibration built from initial deflection and velocity.
#[derive(Debug, Clone)]
pub struct BeamResponse {
    pub spectrum: BeamSpectrum,
    /// (a_n, b_n) for the elastic modes.
    pub coefficients: Vec<(f64, f64)>,
    /// (a, b) for the rigid modes of a free–free beam.
    pub rigid: Vec<(f64, f64)>,
}

impl BeamResponse {
    pub fn new(
        spectrum: BeamSpectrum,
        u0: &(dyn Fn(f64) -> f64 + Sync),
        v0: &(dyn Fn(f64) -> f64 + Sync),
        exec: Exec,
    ) -> Self {
        let l = spectrum.l;
        let project = |g: &(dyn Fn(f64) -> f64 + Sync), f: &dyn Fn(f64) -> f64, pieces: usize| {
            let breaks: Vec<f64> = (0..=pieces).map(|k| l * k as f64 / pieces as f64).collect();
            gauss_kronrod_points(|x| g(x) * f(x), &breaks, 1e-13, 1e-12).value
        };
        let coefficients = par::map_indexed(exec, spectrum.len(), |i| {
            let m = |x: f64| spectrum.mode(i + 1, x);
            (project(u0, &m, i + 2), project(v0, &m, i + 2))
        });
        let rigid = (1..=spectrum.bc.rigid_modes())
            .map(|j| {
                let m = |x: f64| spectrum.rigid_mode(j, x).unwrap_or(0.0);
                (project(u0, &m, 2), project(v0, &m, 2))
            })
            .collect();
        Self {
            spectrum,
            coefficients,
            rigid,
        }
    }

    pub fn value(&self, x: f64, t: f64) -> f64 {
        let s = &self.spectrum;
        let elastic = par::sum_indexed(Exec::Sequential, self.coefficients.len(), |i| {
            let (a, b) = self.coefficients[i];
            let w = s.frequency(i + 1);
            (a * (w * t).cos() + b / w * (w * t).sin()) * s.mode(i + 1, x)
        });
        let rigid: f64 = self
            .rigid
            .iter()
            .enumerate()
            .map(|(j, &(a, b))| (a + b * t) * s.rigid_mode(j + 1, x).unwrap_or(0.0))
            .sum();
        elastic + rigid
    }
}

/// Truncated free-vibration series at (x, t) with `n` elastic modes.
#[allow(clippy::too_many_arguments)]
pub fn beam_response(
    bc: BeamBc,
    c: f64,
    l: f64,
    u0: &(dyn Fn(f64) -> f64 + Sync),
    v0: &(dyn Fn(f64) -> f64 + Sync),
    n: usize,
    x: f64,
    t: f64,
) -> Result<f64> {
    let spec = BeamSpectrum::new(bc, c, l, n)?;
    Ok(BeamResponse::new(spec, u0, v0, Exec::default()).value(x, t))
}

/// Loss-of-stability determinant in σ = l√(F/EJ).
pub fn buckling_determinant(bc: BeamBc, sigma: f64) -> Result<f64> {
    Ok(match bc {
        BeamBc::ClampedClamped => 2.0 * (1.0 - sigma.cos()) - sigma * sigma.sin(),
        BeamBc::PinnedPinned => sigma.sin(),
        BeamBc::ClampedFree => sigma.cos(),
        BeamBc::ClampedPinned => sigma.sin() - sigma * sigma.cos(),
        BeamBc::FreeFree => {
            return Err(Error::Unsupported("an unrestrained beam has no buckling load".into()));
        }
    })
}

/// Euler critical load F_cr = σ₁² EJ/l², σ₁ the first positive root of the
/// buckling determinant.
pub fn buckling_critical(bc: BeamBc, e: f64, j: f64, l: f64) -> Result<f64> {
    if !(e > 0.0 && j > 0.0 && l > 0.0) {
        return Err(domain("buckling_critical", format!("need E, J, l > 0, got {e}, {j}, {l}")));
    }
    buckling_determinant(bc, 1.0)?;
    let f = |s: f64| buckling_determinant(bc, s).unwrap_or(f64::NAN);
    // the clamped determinant vanishes like σ⁴/12 at the origin: start away
    let (a, b) = scan_brackets(f, 0.1, 4.0 * PI, 800)
        .into_iter()
        .next()
        .ok_or(Error::Bracket { index: 1, lo: 0.1, hi: 4.0 * PI })?;
    let sigma = bisect_secant(f, a, b, RootTol { f_abs: 0.0, x_abs: 1e-15, max_iter: 300 })?;
    Ok(sigma * sigma * e * j / (l * l))
}
