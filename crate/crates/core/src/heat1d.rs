//! Heat conduction and diffusion in one dimension,
//! `u_t = a² u_xx − q u + f`, on the line, the half-line and an interval.
//!
//! Kernel convolutions are taken in the variable ξ = (x′ − x)/√(4a²t),
//! where the Gaussian weight is e^{−ξ²} and does not sharpen as t → 0.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::par::{self, Exec};
use crate::quad::{gauss_kronrod, gauss_kronrod_points, Estimate};
use crate::specfun::{erfc, erfcx};
use crate::sturm::Boundary;
use crate::waves1d::ModeShapes;

/// Gaussian half-width (in units of √(4a²t)) beyond which the kernel is
/// dropped; e^{−64} ≈ 1.6e−28.
pub const KERNEL_CUTOFF: f64 = 8.0;

/// Diffusivity a² with an optional first-order sink rate q.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatMedium {
    pub a2: f64,
    pub q: f64,
}

impl HeatMedium {
    pub fn new(a2: f64) -> Result<Self> {
        Self::with_sink(a2, 0.0)
    }

    pub fn with_sink(a2: f64, q: f64) -> Result<Self> {
        if !(a2 > 0.0 && a2.is_finite()) {
            return Err(Error::InvalidProblem(format!("diffusivity must be positive, got {a2}")));
        }
        if !(q >= 0.0 && q.is_finite()) {
            return Err(Error::InvalidProblem(format!("sink rate must be non-negative, got {q}")));
        }
        Ok(Self { a2, q })
    }

    fn width(&self, t: f64) -> f64 {
        (4.0 * self.a2 * t).sqrt()
    }

    fn sink(&self, t: f64) -> f64 {
        (-self.q * t).exp()
    }
}

fn check_time(func: &'static str, t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(domain(func, format!("time must be positive, got {t}")))
    }
}

/// Fundamental solution G(x − x′; t) = e^{−(x−x′)²/4a²t}/√(4πa²t), times
/// the sink factor e^{−qt}.
pub fn line_kernel(medium: HeatMedium, x: f64, x_src: f64, t: f64) -> Result<f64> {
    check_time("line_kernel", t)?;
    Ok(gauss(medium, x - x_src, t) * medium.sink(t))
}

fn gauss(medium: HeatMedium, d: f64, t: f64) -> f64 {
    let w = medium.width(t);
    (-(d / w).powi(2)).exp() / (PI.sqrt() * w)
}

/// Value and an estimate of what the truncated Gaussian tails could add.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelEval {
    pub value: f64,
    pub abs_err: f64,
    pub tail_bound: f64,
}

// (1/√π)∫_{−C}^{C} e^{−ξ²} g(x + wξ) dξ with breaks at known kinks.
fn gauss_average(g: &dyn Fn(f64) -> f64, x: f64, w: f64, kinks: &[f64]) -> (Estimate, f64) {
    let c = KERNEL_CUTOFF;
    let mut breaks = vec![-c];
    for &k in kinks {
        let xi = (k - x) / w;
        if xi > -c && xi < c {
            breaks.push(xi);
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.push(c);
    let e = gauss_kronrod_points(|xi| (-xi * xi).exp() * g(x + w * xi), &breaks, 1e-14, 1e-12);
    let edge = g(x - c * w).abs().max(g(x + c * w).abs());
    let tail = erfc(c) * edge;
    (
        Estimate {
            value: e.value / PI.sqrt(),
            abs_err: e.abs_err / PI.sqrt(),
        },
        tail,
    )
}

type Source<'a> = &'a (dyn Fn(f64, f64) -> f64 + Sync);

/// Solution on the line: Gaussian convolution of `u0` plus the Duhamel
/// integral of an optional source f(x, t). `kinks` lists points where `u0`
/// is not smooth.
pub fn heat_line_eval(
    u0: &dyn Fn(f64) -> f64,
    source: Option<Source<'_>>,
    medium: HeatMedium,
    x: f64,
    t: f64,
) -> Result<KernelEval> {
    heat_line_eval_split(u0, &[], source, medium, x, t)
}

/// [`heat_line_eval`] with known kinks or jumps of `u0`.
pub fn heat_line_eval_split(
    u0: &dyn Fn(f64) -> f64,
    kinks: &[f64],
    source: Option<Source<'_>>,
    medium: HeatMedium,
    x: f64,
    t: f64,
) -> Result<KernelEval> {
    check_time("heat_line_eval", t)?;
    let (e, tail) = gauss_average(u0, x, medium.width(t), kinks);
    let damp = medium.sink(t);
    let mut out = KernelEval {
        value: e.value * damp,
        abs_err: e.abs_err * damp,
        tail_bound: tail * damp,
    };
    if let Some(f) = source {
        let s = duhamel_line(f, medium, x, t);
        out.value += s.value;
        out.abs_err += s.abs_err;
    }
    Ok(out)
}

fn duhamel_line(f: Source<'_>, medium: HeatMedium, x: f64, t: f64) -> Estimate {
    let inner = |tau: f64| {
        let dt = t - tau;
        if dt <= 0.0 {
            return f(x, tau);
        }
        let g = |y: f64| f(y, tau);
        gauss_average(&g, x, medium.width(dt), &[]).0.value * medium.sink(dt)
    };
    gauss_kronrod(inner, 0.0, t, 1e-13, 1e-10)
}

/// End condition of a half-line x ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HalfLineBc {
    /// u(0) = 0 (h = ∞).
    Dirichlet,
    /// u_x(0) = 0 (h = 0).
    Neumann,
    /// u_x(0) − h u(0) = 0.
    Robin(f64),
}

impl HalfLineBc {
    /// Normalise `Robin(0)` and `Robin(∞)`.
    pub fn from_h(h: f64) -> Result<Self> {
        if h.is_nan() || h < 0.0 {
            return Err(domain("HalfLineBc", format!("Robin parameter must be >= 0, got {h}")));
        }
        Ok(if h == 0.0 {
            HalfLineBc::Neumann
        } else if h.is_infinite() {
            HalfLineBc::Dirichlet
        } else {
            HalfLineBc::Robin(h)
        })
    }
}

/// How the Robin correction 2h∫₀^∞ G(s+u; t) e^{−hu} du is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailMethod {
    /// h·e^{−s²/4a²t}·erfcx((s + 2ha²t)/√(4a²t)).
    ClosedForm,
    /// Adaptive quadrature in u.
    Quadrature,
}

/// The Robin correction term for s = x + x′ (without the sink factor).
pub fn robin_tail(h: f64, medium: HeatMedium, s: f64, t: f64, method: TailMethod) -> Result<f64> {
    check_time("robin_tail", t)?;
    let w = medium.width(t);
    Ok(match method {
        TailMethod::ClosedForm => h * (-(s / w).powi(2)).exp() * erfcx((s + h * w * w / 2.0) / w),
        TailMethod::Quadrature => {
            let core = |u: f64| gauss(medium, s + u, t) * (-h * u).exp();
            // the integrand is below both the Gaussian and e^{−hu}
            let span = (40.0 / h).min(KERNEL_CUTOFF * w);
            2.0 * h * gauss_kronrod(core, 0.0, span, 1e-16, 1e-13).value
        }
    })
}

/// Half-line Green's function G_h(x, x′; t).
pub fn heat_halfline_kernel(bc: HalfLineBc, medium: HeatMedium, x: f64, x_src: f64, t: f64) -> Result<f64> {
    check_time("heat_halfline_kernel", t)?;
    if x < 0.0 || x_src < 0.0 {
        return Err(domain("heat_halfline_kernel", format!("need x, x' >= 0, got {x}, {x_src}")));
    }
    let direct = gauss(medium, x - x_src, t);
    let image = gauss(medium, x + x_src, t);
    let g = match bc {
        HalfLineBc::Dirichlet => direct - image,
        HalfLineBc::Neumann => direct + image,
        HalfLineBc::Robin(h) => direct + image - robin_tail(h, medium, x + x_src, t, TailMethod::ClosedForm)?,
    };
    Ok(g * medium.sink(t))
}

/// Half-line solution `∫₀^∞ G_h(x,x′;t) u0(x′) dx′` plus an optional source.
pub fn heat_halfline_eval(
    u0: &(dyn Fn(f64) -> f64 + Sync),
    bc: HalfLineBc,
    source: Option<Source<'_>>,
    medium: HeatMedium,
    x: f64,
    t: f64,
) -> Result<KernelEval> {
    check_time("heat_halfline_eval", t)?;
    if x < 0.0 {
        return Err(domain("heat_halfline_eval", format!("need x >= 0, got {x}")));
    }
    let initial = halfline_sweep(u0, bc, medium, x, t)?;
    let damp = medium.sink(t);
    let mut out = KernelEval {
        value: initial.0.value * damp,
        abs_err: initial.0.abs_err * damp,
        tail_bound: initial.1 * damp,
    };
    if let Some(f) = source {
        let inner = |tau: f64| {
            let dt = t - tau;
            if dt <= 0.0 {
                return f(x, tau);
            }
            let g = |y: f64| f(y, tau);
            halfline_sweep(&g, bc, medium, x, dt).map(|r| r.0.value).unwrap_or(f64::NAN) * medium.sink(dt)
        };
        let e = gauss_kronrod(inner, 0.0, t, 1e-13, 1e-10);
        out.value += e.value;
        out.abs_err += e.abs_err;
    }
    Ok(out)
}

// Initial-data part without the sink factor.
fn halfline_sweep(
    u0: &(dyn Fn(f64) -> f64 + Sync),
    bc: HalfLineBc,
    medium: HeatMedium,
    x: f64,
    t: f64,
) -> Result<(Estimate, f64)> {
    let sign = match bc {
        HalfLineBc::Dirichlet => -1.0,
        _ => 1.0,
    };
    let ext = |y: f64| if y >= 0.0 { u0(y) } else { sign * u0(-y) };
    let w = medium.width(t);
    let (mut e, tail) = gauss_average(&ext, x, w, &[0.0]);
    if let HalfLineBc::Robin(h) = bc {
        let upper = (KERNEL_CUTOFF * w - x).max(0.0);
        if upper > 0.0 {
            let corr = gauss_kronrod(
                |y| u0(y) * robin_tail(h, medium, x + y, t, TailMethod::ClosedForm).unwrap_or(0.0),
                0.0,
                upper,
                1e-14,
                1e-12,
            );
            e.value -= corr.value;
            e.abs_err += corr.abs_err;
        }
    }
    Ok((e, tail))
}

/// Modal solution on [0, l] with diffusive time laws.
pub struct HeatModal<'a> {
    pub medium: HeatMedium,
    pub shapes: ModeShapes,
    /// a_n = ∫u0 X_n.
    pub coefficients: Vec<f64>,
    /// ∫₀ˡ X_n dx, for the mean value.
    pub mode_means: Vec<f64>,
    source: Option<Source<'a>>,
}

impl std::fmt::Debug for HeatModal<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HeatModal")
            .field("medium", &self.medium)
            .field("modes", &self.coefficients.len())
            .field("forced", &self.source.is_some())
            .finish_non_exhaustive()
    }
}

impl<'a> HeatModal<'a> {
    pub fn truncation(&self) -> usize {
        self.coefficients.len()
    }

    pub fn length(&self) -> f64 {
        self.shapes.length()
    }

    /// λ_n of −X″ = λX.
    pub fn eigenvalue(&self, n: usize) -> f64 {
        self.shapes.wavenumber(n).powi(2)
    }

    /// Decay rate a²λ_n + q of mode n.
    pub fn rate(&self, n: usize) -> f64 {
        self.medium.a2 * self.eigenvalue(n) + self.medium.q
    }

    /// τ_n = 1/(a²λ_n + q); infinite for a conserved zero mode.
    pub fn relaxation_times(&self) -> Vec<f64> {
        (1..=self.truncation()).map(|n| 1.0 / self.rate(n)).collect()
    }

    /// Forced modal amplitude θ_n(t) = ∫₀ᵗ e^{−r_n(t−τ)} f_n(τ) dτ.
    pub fn forced_amplitude(&self, n: usize, t: f64) -> f64 {
        let Some(f) = self.source else { return 0.0 };
        if t <= 0.0 {
            return 0.0;
        }
        let l = self.length();
        let r = self.rate(n);
        let fn_tau = |tau: f64| {
            let pieces = n + 1;
            let breaks: Vec<f64> = (0..=pieces).map(|k| l * k as f64 / pieces as f64).collect();
            gauss_kronrod_points(|x| f(x, tau) * self.shapes.eval(n, x), &breaks, 1e-13, 1e-11).value
        };
        // the kernel e^{−r(t−τ)} lives in a layer of width ~1/r below τ = t
        let mut breaks = vec![0.0];
        for w in [64.0, 8.0, 1.0] {
            let b = t - w / r.max(1e-300);
            if b > *breaks.last().unwrap() {
                breaks.push(b);
            }
        }
        breaks.push(t);
        gauss_kronrod_points(|tau| (-r * (t - tau)).exp() * fn_tau(tau), &breaks, 1e-15, 1e-11).value
    }

    /// Time law of mode n.
    pub fn amplitude(&self, n: usize, t: f64) -> f64 {
        self.coefficients[n - 1] * (-self.rate(n) * t).exp() + self.forced_amplitude(n, t)
    }

    pub fn value(&self, x: f64, t: f64) -> f64 {
        par::sum_indexed(Exec::Sequential, self.truncation(), |i| self.amplitude(i + 1, t) * self.shapes.eval(i + 1, x))
    }

    /// Mean over [0, l].
    pub fn mean(&self, t: f64) -> f64 {
        let s = par::sum_indexed(Exec::Sequential, self.truncation(), |i| self.amplitude(i + 1, t) * self.mode_means[i]);
        s / self.length()
    }

    /// Bound on the discarded tail Σ_{n>N} |a_n| e^{−r_n t} |X_n| assuming
    /// |a_n| ≤ max_k |a_k| and |X_n| ≤ √(2/l)·(1 + h l) for closed forms.
    pub fn tail_bound(&self, t: f64) -> f64 {
        let n = self.truncation();
        let amax = self.coefficients.iter().fold(0.0f64, |m, a| m.max(a.abs()));
        let l = self.length();
        let k_next = self.shapes.wavenumber(n).max(PI / l) + PI / l;
        let r = self.medium.a2 * k_next * k_next + self.medium.q;
        // geometric majorant of e^{−a²(k_N + jπ/l)² t}
        let step = (-self.medium.a2 * (PI / l).powi(2) * t).exp();
        if step >= 1.0 {
            return f64::INFINITY;
        }
        amax * (2.0 / l).sqrt() * 2.0 * (-r * t).exp() / (1.0 - step)
    }

    /// Smallest truncation with e^{−a²λ_{N+1} t} ≤ 1e−14.
    pub fn required_modes(&self, t: f64) -> usize {
        let l = self.length();
        let need = (14.0 * 10f64.ln() / (self.medium.a2 * t.max(f64::MIN_POSITIVE))).sqrt();
        ((need * l / PI).ceil() as usize).max(1)
    }

    /// Time Δ after which the mean has dropped by `factor`, starting at
    /// `t_start`.
    pub fn decay_time(&self, factor: f64, t_start: f64) -> Result<f64> {
        let start = self.mean(t_start);
        let target = start / factor;
        let f = |d: f64| self.mean(t_start + d) - target;
        let mut hi = self.relaxation_times()[0].clamp(1e-12, 1e6);
        let mut guard = 0;
        while f(hi) > 0.0 {
            hi *= 2.0;
            guard += 1;
            if guard > 200 {
                return Err(Error::Bracket { index: 1, lo: 0.0, hi });
            }
        }
        crate::roots::bisect_secant(f, 0.0, hi, crate::roots::RootTol { f_abs: 0.0, x_abs: 1e-14, max_iter: 300 })
    }
}

/// Modal solution of the interval problem with optional source f(x, t).
pub fn heat_interval_modes<'a>(
    medium: HeatMedium,
    l: f64,
    left: Boundary,
    right: Boundary,
    u0: &(dyn Fn(f64) -> f64 + Sync),
    source: Option<Source<'a>>,
    n: usize,
) -> Result<HeatModal<'a>> {
    if n == 0 {
        return Err(domain("heat_interval_modes", "truncation must be at least 1"));
    }
    if !(l > 0.0) {
        return Err(Error::InvalidProblem(format!("length must be positive, got {l}")));
    }
    let shapes = ModeShapes::new(l, left, right, n)?;
    let project = |g: &(dyn Fn(f64) -> f64 + Sync), k: usize| {
        let pieces = k + 1;
        let breaks: Vec<f64> = (0..=pieces).map(|j| l * j as f64 / pieces as f64).collect();
        gauss_kronrod_points(|x| g(x) * shapes.eval(k, x), &breaks, 1e-14, 1e-12).value
    };
    let one = |_: f64| 1.0;
    let coefficients = par::map_indexed(Exec::default(), n, |i| project(u0, i + 1));
    let mode_means = par::map_indexed(Exec::default(), n, |i| project(&one, i + 1));
    Ok(HeatModal {
        medium,
        shapes,
        coefficients,
        mode_means,
        source,
    })
}

/// Short-time interval solution by summing images: the line solution for
/// the reflected, periodically continued initial data. Only fixed and
/// insulated ends have such a continuation. Use it where the modal series
/// would need too many terms, see [`HeatModal::required_modes`].
pub fn heat_interval_images(
    medium: HeatMedium,
    l: f64,
    left: Boundary,
    right: Boundary,
    u0: &dyn Fn(f64) -> f64,
    x: f64,
    t: f64,
) -> Result<KernelEval> {
    use crate::waves1d::{extend, ExtensionMode};
    use Boundary::{Dirichlet as D, Robin};
    let mode = match (left, right) {
        (D, D) => ExtensionMode::OddOdd,
        (D, Robin(0.0)) => ExtensionMode::OddEven,
        (Robin(a), Robin(b)) if a == 0.0 && b == 0.0 => ExtensionMode::EvenEven,
        (Robin(0.0), D) => {
            // mirror to fixed–free and evaluate at l − x
            let flipped = |y: f64| u0(l - y);
            return heat_interval_images(medium, l, D, Boundary::NEUMANN, &flipped, l - x, t);
        }
        _ => return Err(Error::Unsupported("image summation needs fixed or insulated ends".into())),
    };
    if !(0.0..=l).contains(&x) {
        return Err(domain("heat_interval_images", format!("x = {x} outside [0, {l}]")));
    }
    let e = extend(u0, l, mode);
    let w = medium.width(t.max(0.0));
    let kinks = e.breakpoints(x - KERNEL_CUTOFF * w, x + KERNEL_CUTOFF * w);
    heat_line_eval_split(&|y| e.eval(y), &kinks, None, medium, x, t)
}

/// Frequency-domain kernel of the Dirichlet rod for a source e^{−iωt}:
///
/// ```text
/// G_ω = sin(κx_<) sin(κ(l − x_>)) / (cρ a² κ sin κl),   κ = √(iω)/a,
/// ```
///
/// with the ω = 0 limit x_<(l − x_>)/(cρ a² l).
pub fn freq_green_heat(medium: HeatMedium, c_rho: f64, l: f64, omega: f64, x: f64, x_src: f64) -> Result<Complex64> {
    if !(c_rho > 0.0 && l > 0.0) {
        return Err(domain("freq_green_heat", format!("need c·rho > 0 and l > 0, got {c_rho}, {l}")));
    }
    for (name, v) in [("x", x), ("x'", x_src)] {
        if !(0.0..=l).contains(&v) {
            return Err(domain("freq_green_heat", format!("{name} = {v} outside [0, {l}]")));
        }
    }
    let (lo, hi) = if x <= x_src { (x, x_src) } else { (x_src, x) };
    let scale = c_rho * medium.a2;
    if omega == 0.0 && medium.q == 0.0 {
        return Ok(Complex64::new(lo * (l - hi) / (scale * l), 0.0));
    }
    // absorption shifts iω to iω − q
    let mut root = Complex64::new(-medium.q, omega).sqrt();
    if root.im < 0.0 {
        root = -root;
    }
    let k = root / medium.a2.sqrt();
    Ok((k * lo).sin() * (k * (l - hi)).sin() / (scale * k * (k * l).sin()))
}
