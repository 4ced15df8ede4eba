//! One-dimensional waves: d'Alembert and Duhamel formulas, continuation of
//! initial data, modal solutions with optional damping, the Gibbs
//! phenomenon and string Green's functions.
//!
//! The string obeys `u_tt + 2η u_t = a² u_xx + f/ρ`. Mode shapes are
//! normalised to `∫₀ˡ X_n² dx = 1`, so the energy of mode n is
//! `½ρ(q̇_n² + ω_n² q_n²)`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::par::{self, Exec};
use crate::quad::{gauss_kronrod, gauss_kronrod_points};
use crate::sturm::{eigen_solve, Boundary, EigenBasis, SlProblem, DEFAULT_STEPS};

/// Medium of a string or rod.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveMedium {
    /// Wave speed a.
    pub a: f64,
    /// Length l (ignored on the line).
    pub l: f64,
    /// Damping rate η.
    pub eta: f64,
    /// Linear density ρ.
    pub rho: f64,
}

impl WaveMedium {
    pub fn new(a: f64, l: f64, eta: f64, rho: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidProblem(format!("wave speed must be positive, got {a}")));
        }
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::InvalidProblem(format!("length must be positive, got {l}")));
        }
        if !(eta >= 0.0 && eta.is_finite()) {
            return Err(Error::InvalidProblem(format!("damping must be non-negative, got {eta}")));
        }
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::InvalidProblem(format!("density must be positive, got {rho}")));
        }
        Ok(Self { a, l, eta, rho })
    }
}

// Value of f at ξ, averaged over the one-sided limits so that jumps of
// piecewise data report the midpoint on characteristic lines.
fn midpoint_value(f: &dyn Fn(f64) -> f64, xi: f64) -> f64 {
    let eps = 1e-11 * xi.abs().max(1.0);
    0.5 * (f(xi - eps) + f(xi + eps))
}

/// How initial data on [0, l] (or [0, ∞)) are continued to the whole line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtensionMode {
    /// Odd about 0 and about l, period 2l (both ends fixed).
    OddOdd,
    /// Odd about 0, even about l, period 4l (fixed–free).
    OddEven,
    /// Even about 0 and about l, period 2l (both ends free).
    EvenEven,
    /// Odd about 0 on the half-line (fixed end).
    HalfOdd,
    /// Even about 0 on the half-line (free end).
    HalfEven,
}

/// Extended initial function.
#[derive(Clone)]
pub struct Extension<F> {
    base: F,
    l: f64,
    mode: ExtensionMode,
}

/// Continue `base` from [0, l] to ℝ according to `mode`. For the half-line
/// modes `l` is ignored.
pub fn extend<F: Fn(f64) -> f64>(base: F, l: f64, mode: ExtensionMode) -> Extension<F> {
    Extension { base, l, mode }
}

impl<F: Fn(f64) -> f64> Extension<F> {
    pub fn mode(&self) -> ExtensionMode {
        self.mode
    }

    /// Points in (lo, hi) where the extension may be non-smooth: the
    /// reflection points 0 and multiples of l.
    pub fn breakpoints(&self, lo: f64, hi: f64) -> Vec<f64> {
        let step = match self.mode {
            ExtensionMode::HalfOdd | ExtensionMode::HalfEven => {
                return if lo < 0.0 && hi > 0.0 { vec![0.0] } else { vec![] };
            }
            _ => self.l,
        };
        let first = (lo / step).floor() as i64 + 1;
        let last = (hi / step).ceil() as i64 - 1;
        (first..=last).map(|k| k as f64 * step).filter(|&p| p > lo && p < hi).collect()
    }

    pub fn eval(&self, x: f64) -> f64 {
        let l = self.l;
        let f = &self.base;
        match self.mode {
            ExtensionMode::HalfOdd => {
                if x >= 0.0 {
                    f(x)
                } else {
                    -f(-x)
                }
            }
            ExtensionMode::HalfEven => f(x.abs()),
            ExtensionMode::OddOdd => {
                let y = x - 2.0 * l * ((x + l) / (2.0 * l)).floor();
                if y >= 0.0 {
                    f(y)
                } else {
                    -f(-y)
                }
            }
            ExtensionMode::EvenEven => {
                let y = x.rem_euclid(2.0 * l);
                if y <= l {
                    f(y)
                } else {
                    f(2.0 * l - y)
                }
            }
            ExtensionMode::OddEven => {
                let y = x.rem_euclid(4.0 * l);
                let (y, sign) = if y > 2.0 * l { (4.0 * l - y, -1.0) } else { (y, 1.0) };
                let y = if y > l { 2.0 * l - y } else { y };
                sign * f(y)
            }
        }
    }
}

/// d'Alembert's solution on the infinite line.
pub fn dalembert(u0: &dyn Fn(f64) -> f64, v0: &dyn Fn(f64) -> f64, a: f64, x: f64, t: f64) -> f64 {
    dalembert_split(u0, v0, a, x, t, &[])
}

/// [`dalembert`] with known kinks or jumps of `v0` (for instance
/// [`Extension::breakpoints`]) passed to the quadrature.
pub fn dalembert_split(
    u0: &dyn Fn(f64) -> f64,
    v0: &dyn Fn(f64) -> f64,
    a: f64,
    x: f64,
    t: f64,
    kinks: &[f64],
) -> f64 {
    let at = a * t;
    let shift = 0.5 * (midpoint_value(u0, x + at) + midpoint_value(u0, x - at));
    if at == 0.0 {
        return shift;
    }
    let tol = 1e-13 * (1.0 + t.abs());
    let (lo, hi) = (x - at, x + at);
    let mut breaks = vec![lo];
    let mut inner: Vec<f64> = kinks.iter().copied().filter(|&k| k > lo && k < hi).collect();
    inner.sort_by(f64::total_cmp);
    breaks.extend(inner);
    breaks.push(hi);
    let impulse = gauss_kronrod_points(v0, &breaks, tol, 0.0).value;
    shift + impulse / (2.0 * a)
}

/// Condition at the end of a half-line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfLineEnd {
    Fixed,
    Free,
}

/// Half-line solution by continuation of the data across x = 0.
pub fn halfline_eval(
    u0: &dyn Fn(f64) -> f64,
    v0: &dyn Fn(f64) -> f64,
    end: HalfLineEnd,
    a: f64,
    x: f64,
    t: f64,
) -> Result<f64> {
    if x < 0.0 || t < 0.0 {
        return Err(domain("halfline_eval", format!("need x >= 0 and t >= 0, got x={x}, t={t}")));
    }
    let at = a * t;
    let tol = 1e-13 * (1.0 + t);
    let fwd = midpoint_value(u0, x + at);
    let back = x - at;
    if back >= 0.0 {
        return Ok(dalembert(u0, v0, a, x, t));
    }
    let int = |lo: f64, hi: f64| gauss_kronrod(v0, lo, hi, tol, 0.0).value;
    let v = match end {
        HalfLineEnd::Fixed => {
            0.5 * (fwd - midpoint_value(u0, -back)) + int(-back, x + at) / (2.0 * a)
        }
        HalfLineEnd::Free => {
            0.5 * (fwd + midpoint_value(u0, -back)) + (int(0.0, x + at) + int(0.0, -back)) / (2.0 * a)
        }
    };
    Ok(v)
}

/// Forced response on the line with zero initial data,
/// `(1/2a)∫₀ᵗ dτ ∫_{x−a(t−τ)}^{x+a(t−τ)} f(ξ, τ) dξ`.
///
/// The characteristic triangle is mapped to a square by τ = ts,
/// ξ = x + a t(1−s)r, and integrated by nested adaptive quadrature.
pub fn duhamel_forced(f: &dyn Fn(f64, f64) -> f64, a: f64, x: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let inner = |s: f64| {
        let tau = t * s;
        let half = a * t * (1.0 - s);
        if half == 0.0 {
            return 0.0;
        }
        (1.0 - s) * gauss_kronrod(|r| f(x + half * r, tau), -1.0, 1.0, 1e-12, 1e-11).value
    };
    0.5 * t * t * gauss_kronrod(inner, 0.0, 1.0, 1e-12, 1e-10).value
}

/// Normalised mode shapes of `−X″ = λX` on [0, l].
#[derive(Debug, Clone)]
pub enum ModeShapes {
    /// Both ends fixed: √(2/l) sin(πnx/l).
    FixedFixed { l: f64 },
    /// Fixed at 0, free at l: √(2/l) sin(π(n−½)x/l).
    FixedFree { l: f64 },
    /// Free at 0, fixed at l: √(2/l) cos(π(n−½)x/l).
    FreeFixed { l: f64 },
    /// Both free: 1/√l, then √(2/l) cos(π(n−1)x/l).
    FreeFree { l: f64 },
    /// Elastic ends, from the Sturm–Liouville solver.
    Numeric(Arc<EigenBasis>),
}

impl ModeShapes {
    /// Shapes for the given ends with at least `count` modes available.
    pub fn new(l: f64, left: Boundary, right: Boundary, count: usize) -> Result<Self> {
        use Boundary::{Dirichlet as D, Robin};
        Ok(match (left, right) {
            (D, D) => ModeShapes::FixedFixed { l },
            (D, Robin(0.0)) => ModeShapes::FixedFree { l },
            (Robin(0.0), D) => ModeShapes::FreeFixed { l },
            (Robin(h1), Robin(h2)) if h1 == 0.0 && h2 == 0.0 => ModeShapes::FreeFree { l },
            _ => {
                let steps = (DEFAULT_STEPS.max(64 * count) + 1) & !1;
                let pr = SlProblem::with_steps(
                    crate::func(|_| 1.0),
                    crate::func(|_| 0.0),
                    crate::func(|_| 1.0),
                    l,
                    left,
                    right,
                    steps,
                )?;
                ModeShapes::Numeric(Arc::new(eigen_solve(&pr, count)?))
            }
        })
    }

    pub fn length(&self) -> f64 {
        match self {
            ModeShapes::FixedFixed { l }
            | ModeShapes::FixedFree { l }
            | ModeShapes::FreeFixed { l }
            | ModeShapes::FreeFree { l } => *l,
            ModeShapes::Numeric(b) => b.length,
        }
    }

    /// Number of modes available (unbounded for closed forms).
    pub fn available(&self) -> usize {
        match self {
            ModeShapes::Numeric(b) => b.len(),
            _ => usize::MAX,
        }
    }

    /// √λ_n, n 1-based.
    pub fn wavenumber(&self, n: usize) -> f64 {
        let nf = n as f64;
        match self {
            ModeShapes::FixedFixed { l } => PI * nf / l,
            ModeShapes::FixedFree { l } | ModeShapes::FreeFixed { l } => PI * (nf - 0.5) / l,
            ModeShapes::FreeFree { l } => PI * (nf - 1.0) / l,
            ModeShapes::Numeric(b) => b.eigenvalues[n - 1].max(0.0).sqrt(),
        }
    }

    pub fn eval(&self, n: usize, x: f64) -> f64 {
        let k = self.wavenumber(n);
        match self {
            ModeShapes::FixedFixed { l } | ModeShapes::FixedFree { l } => (2.0 / l).sqrt() * (k * x).sin(),
            ModeShapes::FreeFixed { l } => (2.0 / l).sqrt() * (k * x).cos(),
            ModeShapes::FreeFree { l } => {
                if n == 1 {
                    1.0 / l.sqrt()
                } else {
                    (2.0 / l).sqrt() * (k * x).cos()
                }
            }
            ModeShapes::Numeric(b) => b.eval(n, x),
        }
    }

    pub fn derivative(&self, n: usize, x: f64) -> f64 {
        let k = self.wavenumber(n);
        match self {
            ModeShapes::FixedFixed { l } | ModeShapes::FixedFree { l } => (2.0 / l).sqrt() * k * (k * x).cos(),
            ModeShapes::FreeFixed { l } | ModeShapes::FreeFree { l } => -(2.0 / l).sqrt() * k * (k * x).sin(),
            ModeShapes::Numeric(b) => b.eval_derivative(n, x),
        }
    }
}

/// Regime of a damped mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Oscillatory,
    /// η = ω_n: Ω_n = 0.
    Critical,
    /// η > ω_n; `big_omega` then holds √(η² − ω_n²).
    Aperiodic,
}

/// Time law of one mode: q_n(0) = a, q̇_n(0) = b.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeLaw {
    pub a: f64,
    pub b: f64,
    pub omega: f64,
    pub big_omega: f64,
    pub regime: Regime,
}

impl ModeLaw {
    fn new(a: f64, b: f64, omega: f64, eta: f64) -> Self {
        let d = omega * omega - eta * eta;
        let scale = omega.max(eta).max(f64::MIN_POSITIVE);
        let (big_omega, regime) = if d.abs() <= 1e-12 * scale * scale {
            (0.0, Regime::Critical)
        } else if d > 0.0 {
            (d.sqrt(), Regime::Oscillatory)
        } else {
            ((-d).sqrt(), Regime::Aperiodic)
        };
        Self {
            a,
            b,
            omega,
            big_omega,
            regime,
        }
    }

    /// (q(t), q̇(t)) for damping η.
    pub fn state(&self, eta: f64, t: f64) -> (f64, f64) {
        let (a, c) = (self.a, self.b + eta * self.a);
        let w = self.big_omega;
        // g(t) = a·C(t) + c·S(t) with S the impulse law, C = S′ at η = 0
        let (cw, sw_over, sw_times) = match self.regime {
            Regime::Oscillatory => ((w * t).cos(), (w * t).sin() / w, -w * (w * t).sin()),
            Regime::Critical => (1.0, t, 0.0),
            Regime::Aperiodic => ((w * t).cosh(), (w * t).sinh() / w, w * (w * t).sinh()),
        };
        let g = a * cw + c * sw_over;
        let dg = a * sw_times + c * cw;
        let e = (-eta * t).exp();
        (e * g, e * (dg - eta * g))
    }
}

/// Truncated modal solution u(x, t) = Σ q_n(t) X_n(x).
#[derive(Debug, Clone)]
pub struct ModalSolution {
    pub medium: WaveMedium,
    pub shapes: ModeShapes,
    pub modes: Vec<ModeLaw>,
    /// Estimate of Σ_{n>N}(|a_n| + |b_n|/ω_n).
    pub tail_bound: f64,
    /// Non-fatal diagnostics, e.g. initial data violating a fixed end.
    pub warnings: Vec<String>,
}

impl ModalSolution {
    pub fn truncation(&self) -> usize {
        self.modes.len()
    }

    pub fn q(&self, n: usize, t: f64) -> f64 {
        self.modes[n - 1].state(self.medium.eta, t).0
    }

    pub fn q_dot(&self, n: usize, t: f64) -> f64 {
        self.modes[n - 1].state(self.medium.eta, t).1
    }

    pub fn displacement(&self, x: f64, t: f64) -> f64 {
        self.displacement_with(x, t, Exec::Sequential)
    }

    pub fn displacement_with(&self, x: f64, t: f64, exec: Exec) -> f64 {
        par::sum_indexed(exec, self.modes.len(), |i| self.q(i + 1, t) * self.shapes.eval(i + 1, x))
    }

    pub fn velocity(&self, x: f64, t: f64) -> f64 {
        par::sum_indexed(Exec::Sequential, self.modes.len(), |i| self.q_dot(i + 1, t) * self.shapes.eval(i + 1, x))
    }

    pub fn slope(&self, x: f64, t: f64) -> f64 {
        par::sum_indexed(Exec::Sequential, self.modes.len(), |i| {
            self.q(i + 1, t) * self.shapes.derivative(i + 1, x)
        })
    }

    /// ½ρ(q̇_n² + ω_n² q_n²).
    pub fn mode_energy(&self, n: usize, t: f64) -> f64 {
        let (q, qd) = self.modes[n - 1].state(self.medium.eta, t);
        let w = self.modes[n - 1].omega;
        0.5 * self.medium.rho * (qd * qd + w * w * q * q)
    }

    pub fn energy(&self, t: f64) -> f64 {
        par::sum_indexed(Exec::Sequential, self.modes.len(), |i| self.mode_energy(i + 1, t))
    }

    /// Kinetic energy T(t) = ½ρ∫u_t².
    pub fn kinetic(&self, t: f64) -> f64 {
        par::sum_indexed(Exec::Sequential, self.modes.len(), |i| {
            0.5 * self.medium.rho * self.q_dot(i + 1, t).powi(2)
        })
    }
}

fn mode_coefficient(shapes: &ModeShapes, n: usize, f: &(dyn Fn(f64) -> f64 + Sync)) -> f64 {
    let l = shapes.length();
    let pieces = n + 1;
    let breaks: Vec<f64> = (0..=pieces).map(|k| l * k as f64 / pieces as f64).collect();
    gauss_kronrod_points(|x| f(x) * shapes.eval(n, x), &breaks, 1e-13, 1e-12).value
}

/// Σ_{n>N} c_n from a power-law fit to the last sixteen nonzero terms.
fn tail_estimate(c: &[f64]) -> f64 {
    let peak = c.iter().cloned().fold(0.0, f64::max);
    if peak == 0.0 {
        return 0.0;
    }
    let pts: Vec<(f64, f64)> = c
        .iter()
        .enumerate()
        .filter(|(_, v)| **v > 1e-15 * peak)
        .map(|(i, v)| (((i + 1) as f64).ln(), v.ln()))
        .collect();
    let tail = &pts[pts.len().saturating_sub(16)..];
    let n_last = c.len() as f64;
    if tail.len() < 4 {
        // too few informative terms: bound by the last one, repeated
        return c.last().copied().unwrap_or(0.0) * n_last;
    }
    let m = tail.len() as f64;
    let (sx, sy) = tail.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let (sxx, sxy) = tail
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx).powi(2), b + (x - mx) * (y - my)));
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let p = -slope;
    // envelope through the largest of the fitted terms
    let log_c = tail.iter().map(|(x, y)| y + p * x).fold(f64::NEG_INFINITY, f64::max);
    if p <= 1.0 {
        return f64::INFINITY;
    }
    log_c.exp() * n_last.powf(1.0 - p) / (p - 1.0)
}

/// Modal solution of the (possibly damped) string with initial shape `u0`
/// and velocity `v0`, truncated at `n` modes.
pub fn string_modes(
    medium: WaveMedium,
    left: Boundary,
    right: Boundary,
    u0: &(dyn Fn(f64) -> f64 + Sync),
    v0: &(dyn Fn(f64) -> f64 + Sync),
    n: usize,
) -> Result<ModalSolution> {
    let shapes = ModeShapes::new(medium.l, left, right, n)?;
    string_modes_on(medium, shapes, u0, v0, n, Exec::default())
}

/// As [`string_modes`] with prebuilt shapes and an explicit execution mode.
pub fn string_modes_on(
    medium: WaveMedium,
    shapes: ModeShapes,
    u0: &(dyn Fn(f64) -> f64 + Sync),
    v0: &(dyn Fn(f64) -> f64 + Sync),
    n: usize,
    exec: Exec,
) -> Result<ModalSolution> {
    if n == 0 {
        return Err(domain("string_modes", "truncation must be at least 1"));
    }
    if n > shapes.available() {
        return Err(domain("string_modes", format!("only {} modes available", shapes.available())));
    }
    let mut warnings = Vec::new();
    let l = medium.l;
    let fixed_ends: Vec<(f64, &str)> = match &shapes {
        ModeShapes::FixedFixed { .. } => vec![(0.0, "left"), (l, "right")],
        ModeShapes::FixedFree { .. } => vec![(0.0, "left")],
        ModeShapes::FreeFixed { .. } => vec![(l, "right")],
        _ => vec![],
    };
    for (x, side) in fixed_ends {
        let v = u0(x);
        if v.abs() > 1e-12 {
            warnings.push(format!(
                "initial shape is {v} at the fixed {side} end; the series gives the generalised solution"
            ));
        }
    }
    let coeffs: Vec<(f64, f64)> = par::map_indexed(exec, n, |i| {
        (mode_coefficient(&shapes, i + 1, u0), mode_coefficient(&shapes, i + 1, v0))
    });
    let modes: Vec<ModeLaw> = coeffs
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| ModeLaw::new(a, b, medium.a * shapes.wavenumber(i + 1), medium.eta))
        .collect();
    let weights: Vec<f64> = modes
        .iter()
        .map(|m| m.a.abs() + if m.omega > 0.0 { m.b.abs() / m.omega } else { m.b.abs() })
        .collect();
    Ok(ModalSolution {
        medium,
        shapes,
        modes,
        tail_bound: tail_estimate(&weights),
        warnings,
    })
}

/// Damped string with fixed ends.
pub fn damped_modes(
    medium: WaveMedium,
    u0: &(dyn Fn(f64) -> f64 + Sync),
    v0: &(dyn Fn(f64) -> f64 + Sync),
    n: usize,
) -> Result<ModalSolution> {
    string_modes(medium, Boundary::Dirichlet, Boundary::Dirichlet, u0, v0, n)
}

/// Summation used for the sawtooth series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GibbsKind {
    /// Partial sum S_N.
    Dirichlet,
    /// Arithmetic mean σ_N = (S₀ + … + S_{N−1})/N.
    Fejer,
}

/// Partial sums of `(2d/π) Σ sin(πnx/l)/n`, the odd 2l-periodic sawtooth
/// equal to d(1 − x/l) on (0, l].
pub fn gibbs_partial_sum(d: f64, l: f64, n: usize, x: f64, kind: GibbsKind) -> Result<f64> {
    if n == 0 {
        return Err(domain("gibbs_partial_sum", "N must be at least 1"));
    }
    if !(l > 0.0) {
        return Err(domain("gibbs_partial_sum", format!("length must be positive, got {l}")));
    }
    let terms: Vec<f64> = (1..=n)
        .map(|k| {
            let kf = k as f64;
            let w = match kind {
                GibbsKind::Dirichlet => 1.0,
                GibbsKind::Fejer => 1.0 - kf / n as f64,
            };
            w * (PI * kf * x / l).sin() / kf
        })
        .collect();
    Ok(2.0 * d / PI * par::pairwise_sum(&terms))
}

fn left_solution(left: Boundary, k: Complex64, x: f64) -> (Complex64, Complex64) {
    // θ with θ(0)=0, θ′(0)=1 (fixed) or θ(0)=1, θ′(0)=h (elastic)
    let (s, c) = ((k * x).sin(), (k * x).cos());
    let sinc = if k.norm() < 1e-12 { Complex64::new(x, 0.0) } else { s / k };
    match left {
        Boundary::Dirichlet => (sinc, c),
        Boundary::Robin(h) => (c + h * sinc, -k * s + h * c),
    }
}

/// Frequency-domain Green's function of the string, the steady amplitude at
/// x for a unit harmonic point force e^{−iωt} at x′:
///
/// ```text
/// G = φ₁(min(x,x′)) φ₂(max(x,x′)) / (ρ a² W),   λ = (ω² + 2iηω)/a²,
/// ```
///
/// with φ₁, φ₂ solving `X″ + λX = 0` under the left and right end
/// conditions and W = φ₁′φ₂ − φ₁φ₂′. Undamped resonances are refused.
pub fn freq_green_string(
    medium: WaveMedium,
    left: Boundary,
    right: Boundary,
    omega: f64,
    x: f64,
    x_src: f64,
) -> Result<Complex64> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(domain("freq_green_string", format!("frequency must be positive, got {omega}")));
    }
    let l = medium.l;
    for (name, v) in [("x", x), ("x'", x_src)] {
        if !(0.0..=l).contains(&v) {
            return Err(domain("freq_green_string", format!("{name} = {v} outside [0, {l}]")));
        }
    }
    let a2 = medium.a * medium.a;
    let lambda = Complex64::new(omega * omega, 2.0 * medium.eta * omega) / a2;
    let k = lambda.sqrt();
    let w = wronskian(left, right, k, l);
    if medium.eta == 0.0 {
        resonance_guard(medium, left, right, omega)?;
    }
    let (lo, hi) = if x <= x_src { (x, x_src) } else { (x_src, x) };
    let (phi1, _) = left_solution(left, k, lo);
    let (phi2, _) = left_solution(right, k, l - hi);
    Ok(phi1 * phi2 / (medium.rho * a2 * w))
}

// W(k) = −(φ₁φ₂′ − φ₁′φ₂) at x = l, with φ₂ built by reflection from the
// right end; its zeros in k² are the eigenvalues.
fn wronskian(left: Boundary, right: Boundary, k: Complex64, l: f64) -> Complex64 {
    let (p, dp) = left_solution(left, k, l);
    match right {
        Boundary::Dirichlet => p,
        Boundary::Robin(h) => dp + h * p,
    }
}

fn resonance_guard(medium: WaveMedium, left: Boundary, right: Boundary, omega: f64) -> Result<()> {
    let l = medium.l;
    let k = omega / medium.a;
    let wr = |k: f64| wronskian(left, right, Complex64::new(k, 0.0), l).re;
    // one Newton step from k estimates the nearest zero of W
    let dk = 1e-6 * k.max(1.0 / l);
    let w0 = wr(k);
    let slope = (wr(k + dk) - wr(k - dk)) / (2.0 * dk);
    if slope == 0.0 {
        return Ok(());
    }
    let kn = k - w0 / slope;
    if kn <= 0.0 {
        return Ok(());
    }
    let rel = (k - kn).abs() / kn;
    if rel < 1e-6 {
        let mode = (kn * l / PI).round().max(1.0) as usize;
        return Err(Error::Resonance {
            omega,
            mode,
            omega_n: kn * medium.a,
            rel,
        });
    }
    Ok(())
}

/// Impulse response `G(x,x′;t) = (1/ρ) Σ e^{−ηt} sin(Ω_n t)/Ω_n X_n(x)X_n(x′)`
/// truncated at `n` modes.
pub fn time_green_string(
    medium: WaveMedium,
    left: Boundary,
    right: Boundary,
    x: f64,
    x_src: f64,
    t: f64,
    n: usize,
) -> Result<f64> {
    let shapes = ModeShapes::new(medium.l, left, right, n)?;
    time_green_on(medium, &shapes, x, x_src, t, n)
}

/// [`time_green_string`] on prebuilt mode shapes.
pub fn time_green_on(medium: WaveMedium, shapes: &ModeShapes, x: f64, x_src: f64, t: f64, n: usize) -> Result<f64> {
    if t < 0.0 {
        return Err(domain("time_green_string", format!("t must be non-negative, got {t}")));
    }
    if n > shapes.available() {
        return Err(domain("time_green_string", format!("only {} modes available", shapes.available())));
    }
    let s = par::sum_indexed(Exec::Sequential, n, |i| {
        let law = ModeLaw::new(0.0, 1.0, medium.a * shapes.wavenumber(i + 1), medium.eta);
        law.state(medium.eta, t).0 * shapes.eval(i + 1, x) * shapes.eval(i + 1, x_src)
    });
    Ok(s / medium.rho)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_at_origin() {
        let (amp, l, a) = (2.0, 0.7, 1.3);
        let u0 = move |x: f64| amp * (-(x / l).powi(2)).exp();
        let zero = |_: f64| 0.0;
        for &t in &[0.0, 0.2, 1.1] {
            let v = dalembert(&u0, &zero, a, 0.0, t);
            assert!((v - amp * (-(a * t / l).powi(2)).exp()).abs() < 1e-12);
        }
        assert!((dalembert(&u0, &zero, a, 0.4, 0.0) - u0(0.4)).abs() < 1e-14);
    }

    #[test]
    fn velocity_plateau() {
        let (l, v, a) = (1.0, 0.5, 2.0);
        let zero = |_: f64| 0.0;
        let v0 = move |x: f64| if x.abs() <= l { v } else { 0.0 };
        let u = dalembert(&zero, &v0, a, 0.0, 3.0);
        assert!((u - l * v / a).abs() < 1e-9);
    }

    #[test]
    fn extension_parities() {
        let l = 1.5;
        let base = |x: f64| x * (2.0 - x) + 0.3 * x * x * x;
        for &x in &[0.1, 0.7, 1.2] {
            let e = extend(base, l, ExtensionMode::OddOdd);
            assert!((e.eval(-x) + base(x)).abs() < 1e-14);
            assert!((e.eval(x + 2.0 * l) - base(x)).abs() < 1e-12);
            assert!((e.eval(2.0 * l - x) + base(x)).abs() < 1e-12);
            let e = extend(base, l, ExtensionMode::OddEven);
            assert!((e.eval(x + 4.0 * l) - base(x)).abs() < 1e-12);
            assert!((e.eval(2.0 * l - x) - base(x)).abs() < 1e-12);
            assert!((e.eval(-x) + base(x)).abs() < 1e-12);
            let e = extend(base, l, ExtensionMode::EvenEven);
            assert!((e.eval(-x) - base(x)).abs() < 1e-14);
            assert!((e.eval(x - 2.0 * l) - base(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn reflections() {
        let bump = |x: f64| (-(x - 3.0).powi(2) / 0.1).exp();
        let zero = |_: f64| 0.0;
        let a = 1.0;
        // at t = 6 the left-moving half has reflected and sits near x = 3
        let fixed = halfline_eval(&bump, &zero, HalfLineEnd::Fixed, a, 3.0, 6.0).unwrap();
        let free = halfline_eval(&bump, &zero, HalfLineEnd::Free, a, 3.0, 6.0).unwrap();
        assert!((fixed + 0.5).abs() < 1e-10);
        assert!((free - 0.5).abs() < 1e-10);
        let early = halfline_eval(&bump, &zero, HalfLineEnd::Fixed, a, 3.0, 1.0).unwrap();
        assert!((early - dalembert(&bump, &zero, a, 3.0, 1.0)).abs() < 1e-15);
    }

    #[test]
    fn duhamel_constant_source() {
        let f = |_: f64, _: f64| 1.7;
        for &(x, t) in &[(0.0, 1.0), (3.0, 0.4), (-2.0, 2.5)] {
            let u = duhamel_forced(&f, 1.3, x, t);
            assert!((u - 1.7 * t * t / 2.0).abs() < 1e-11, "{u}");
        }
        assert_eq!(duhamel_forced(&f, 1.0, 0.0, 0.0), 0.0);
    }

    #[test]
    fn duhamel_causality() {
        let (x1, t1) = (2.0, 0.5);
        let f = move |x: f64, t: f64| {
            if (x - x1).abs() < 0.01 && (t - t1).abs() < 0.01 {
                1.0
            } else {
                0.0
            }
        };
        assert_eq!(duhamel_forced(&f, 1.0, 0.0, 2.4), 0.0);
    }

    #[test]
    fn single_mode_string() {
        let m = WaveMedium::new(2.0, 1.0, 0.0, 1.0).unwrap();
        let u0 = |x: f64| (PI * x).sin();
        let zero = |_: f64| 0.0;
        let sol = string_modes(m, Boundary::Dirichlet, Boundary::Dirichlet, &u0, &zero, 8).unwrap();
        assert!(sol.warnings.is_empty());
        for &(x, t) in &[(0.3, 0.1), (0.5, 0.77)] {
            let want = (PI * 2.0 * t).cos() * (PI * x).sin();
            assert!((sol.displacement(x, t) - want).abs() < 1e-12);
        }
        for n in 2..=8 {
            assert!(sol.modes[n - 1].a.abs() < 1e-13);
        }
    }

    #[test]
    fn fixed_free_frequencies() {
        let m = WaveMedium::new(3.0, 2.0, 0.0, 1.0).unwrap();
        let u0 = |x: f64| x;
        let zero = |_: f64| 0.0;
        let sol = string_modes(m, Boundary::Dirichlet, Boundary::NEUMANN, &u0, &zero, 5).unwrap();
        for (i, md) in sol.modes.iter().enumerate() {
            let want = PI * (i as f64 + 0.5) * 3.0 / 2.0;
            assert!((md.omega - want).abs() < 1e-13);
        }
    }

    #[test]
    fn incompatible_data_is_flagged() {
        let m = WaveMedium::new(1.0, 1.0, 0.0, 1.0).unwrap();
        let u0 = |_: f64| 1.0;
        let zero = |_: f64| 0.0;
        let sol = string_modes(m, Boundary::Dirichlet, Boundary::Dirichlet, &u0, &zero, 16).unwrap();
        assert_eq!(sol.warnings.len(), 2);
    }

    #[test]
    fn damping_limits() {
        let u0 = |x: f64| x * (1.0 - x);
        let v0 = |x: f64| (PI * x).sin();
        let undamped = WaveMedium::new(1.0, 1.0, 0.0, 1.0).unwrap();
        let a = damped_modes(undamped, &u0, &v0, 16).unwrap();
        let b = string_modes(undamped, Boundary::Dirichlet, Boundary::Dirichlet, &u0, &v0, 16).unwrap();
        assert_eq!(a.displacement(0.3, 0.9), b.displacement(0.3, 0.9));
        let crit = WaveMedium::new(1.0, 1.0, PI, 1.0).unwrap();
        let c = damped_modes(crit, &u0, &v0, 4).unwrap();
        assert_eq!(c.modes[0].regime, Regime::Critical);
        assert_eq!(c.modes[0].big_omega, 0.0);
        assert_eq!(c.modes[1].regime, Regime::Oscillatory);
    }

    #[test]
    fn gibbs_limits() {
        let (d, l) = (1.0, 1.0);
        let n = 200;
        let s = gibbs_partial_sum(d, l, n, l / (n as f64 + 0.5), GibbsKind::Dirichlet).unwrap();
        assert!((s - 1.179).abs() < 0.02);
        let far = gibbs_partial_sum(d, l, 20000, 0.4, GibbsKind::Dirichlet).unwrap();
        assert!((far - 0.6).abs() < 1e-4);
        let at_jump = gibbs_partial_sum(d, l, 500, 0.0, GibbsKind::Fejer).unwrap();
        assert!(at_jump.abs() < 1e-12);
        assert!(gibbs_partial_sum(d, l, 0, 0.1, GibbsKind::Fejer).is_err());
    }

    #[test]
    fn green_boundary_and_resonance() {
        let m = WaveMedium::new(1.0, 1.0, 0.0, 1.0).unwrap();
        let g = freq_green_string(m, Boundary::Dirichlet, Boundary::Dirichlet, 2.0, 0.0, 0.4).unwrap();
        assert!(g.norm() < 1e-15);
        let g = freq_green_string(m, Boundary::Dirichlet, Boundary::Dirichlet, 2.0, 1.0, 0.4).unwrap();
        assert!(g.norm() < 1e-15);
        let r = freq_green_string(m, Boundary::Dirichlet, Boundary::Dirichlet, PI * (1.0 + 1e-8), 0.3, 0.4);
        assert!(matches!(r, Err(Error::Resonance { mode: 1, .. })));
        let r = freq_green_string(m, Boundary::Robin(1.0), Boundary::Robin(2.0), 1.0, 0.3, 0.4);
        assert!(r.is_ok());
    }

    #[test]
    fn time_green_starts_at_zero() {
        let m = WaveMedium::new(1.0, 1.0, 0.1, 1.0).unwrap();
        let g = time_green_string(m, Boundary::Dirichlet, Boundary::Dirichlet, 0.3, 0.6, 0.0, 64).unwrap();
        assert_eq!(g, 0.0);
    }
}
