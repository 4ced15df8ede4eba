//! Sturm–Liouville eigenproblems
//!
//! ```text
//! −(p X′)′ + q X = λ ρ X   on [0, l],
//! X′(0) − h₁ X(0) = 0,  X′(l) + h₂ X(l) = 0,
//! ```
//!
//! with either end optionally Dirichlet. The initial-value solution θ(x; λ)
//! is integrated with a fixed-step fourth-order Runge–Kutta scheme; a Picard
//! iteration of the equivalent Volterra equation is available as an
//! independent route. Eigenvalues are bracketed with a scaled Prüfer phase
//! (which also yields the node count) and polished on the characteristic
//! function m(λ).

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::par::{self, Exec};
use crate::quad::{simpson_samples, GaussLegendre};
use crate::roots::{bisect_secant, RootTol};
use crate::Func;

/// Default number of integration steps on [0, l].
pub const DEFAULT_STEPS: usize = 4096;

/// End condition at one side of the interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Boundary {
    /// X′ ∓ hX = 0 with h ≥ 0; h = 0 is the free (Neumann) end.
    Robin(f64),
    /// X = 0.
    Dirichlet,
}

impl Boundary {
    pub const NEUMANN: Boundary = Boundary::Robin(0.0);

    fn robin_h(self) -> Option<f64> {
        match self {
            Boundary::Robin(h) => Some(h),
            Boundary::Dirichlet => None,
        }
    }
}

/// Extremes of the coefficients sampled on the integration grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefBounds {
    pub p_min: f64,
    pub p_max: f64,
    pub q_min: f64,
    pub q_max: f64,
    pub rho_min: f64,
    pub rho_max: f64,
}

impl CoefBounds {
    /// Two-sided eigenvalue estimate for index n ≥ 1 (valid for h₁, h₂ ≥ 0).
    pub fn eigenvalue_window(&self, n: usize, l: f64) -> (f64, f64) {
        let nf = n as f64;
        let lo = self.p_min / self.rho_max * PI * PI * (nf - 1.0).powi(2) / (l * l) + self.q_min / self.rho_max;
        let hi = self.p_max / self.rho_min * PI * PI * nf * nf / (l * l) + self.q_max / self.rho_min;
        (lo, hi)
    }
}

/// A regular Sturm–Liouville problem.
#[derive(Clone)]
pub struct SlProblem {
    p: Func,
    q: Func,
    rho: Func,
    length: f64,
    left: Boundary,
    right: Boundary,
    steps: usize,
    // (p, q, ρ) at x_k = k·h/2, k = 0..=2·steps
    samples: Vec<[f64; 3]>,
    bounds: CoefBounds,
}

impl std::fmt::Debug for SlProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SlProblem")
            .field("length", &self.length)
            .field("left", &self.left)
            .field("right", &self.right)
            .field("steps", &self.steps)
            .field("bounds", &self.bounds)
            .finish_non_exhaustive()
    }
}

impl SlProblem {
    pub fn new(p: Func, q: Func, rho: Func, length: f64, left: Boundary, right: Boundary) -> Result<Self> {
        Self::with_steps(p, q, rho, length, left, right, DEFAULT_STEPS)
    }

    /// Constant coefficients.
    pub fn constant(p: f64, q: f64, rho: f64, length: f64, left: Boundary, right: Boundary) -> Result<Self> {
        Self::new(
            crate::func(move |_| p),
            crate::func(move |_| q),
            crate::func(move |_| rho),
            length,
            left,
            right,
        )
    }

    pub fn with_steps(
        p: Func,
        q: Func,
        rho: Func,
        length: f64,
        left: Boundary,
        right: Boundary,
        steps: usize,
    ) -> Result<Self> {
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidProblem(format!("length must be positive, got {length}")));
        }
        if steps < 8 || steps % 2 == 1 {
            return Err(Error::InvalidProblem(format!("step count must be even and >= 8, got {steps}")));
        }
        for (side, bc) in [("left", left), ("right", right)] {
            if let Boundary::Robin(h) = bc {
                if !(h >= 0.0) || !h.is_finite() {
                    return Err(Error::InvalidProblem(format!("{side} Robin parameter must be finite and >= 0, got {h}")));
                }
            }
        }
        let half = length / (2 * steps) as f64;
        let samples: Vec<[f64; 3]> = (0..=2 * steps)
            .map(|k| {
                let x = if k == 2 * steps { length } else { k as f64 * half };
                [p(x), q(x), rho(x)]
            })
            .collect();
        let mut b = CoefBounds {
            p_min: f64::INFINITY,
            p_max: f64::NEG_INFINITY,
            q_min: f64::INFINITY,
            q_max: f64::NEG_INFINITY,
            rho_min: f64::INFINITY,
            rho_max: f64::NEG_INFINITY,
        };
        for s in &samples {
            if !s.iter().all(|v| v.is_finite()) {
                return Err(Error::InvalidProblem("coefficients must be finite on [0, l]".into()));
            }
            b.p_min = b.p_min.min(s[0]);
            b.p_max = b.p_max.max(s[0]);
            b.q_min = b.q_min.min(s[1]);
            b.q_max = b.q_max.max(s[1]);
            b.rho_min = b.rho_min.min(s[2]);
            b.rho_max = b.rho_max.max(s[2]);
        }
        if b.p_min <= 0.0 {
            return Err(Error::InvalidProblem(format!("p must be positive, min is {}", b.p_min)));
        }
        if b.rho_min <= 0.0 {
            return Err(Error::InvalidProblem(format!("rho must be positive, min is {}", b.rho_min)));
        }
        if b.q_min < 0.0 {
            return Err(Error::InvalidProblem(format!("q must be non-negative, min is {}", b.q_min)));
        }
        Ok(Self {
            p,
            q,
            rho,
            length,
            left,
            right,
            steps,
            samples,
            bounds: b,
        })
    }

    pub fn length(&self) -> f64 {
        self.length
    }
    pub fn left(&self) -> Boundary {
        self.left
    }
    pub fn right(&self) -> Boundary {
        self.right
    }
    pub fn steps(&self) -> usize {
        self.steps
    }
    pub fn bounds(&self) -> CoefBounds {
        self.bounds
    }
    pub fn p(&self, x: f64) -> f64 {
        (self.p)(x)
    }
    pub fn q(&self, x: f64) -> f64 {
        (self.q)(x)
    }
    pub fn rho(&self, x: f64) -> f64 {
        (self.rho)(x)
    }

    /// Same coefficients, new boundary conditions.
    pub fn with_boundaries(&self, left: Boundary, right: Boundary) -> Result<Self> {
        Self::with_steps(self.p.clone(), self.q.clone(), self.rho.clone(), self.length, left, right, self.steps)
    }

    fn h(&self) -> f64 {
        self.length / self.steps as f64
    }

    /// Initial data (θ(0), θ′(0)) selecting the solution that satisfies the
    /// left boundary condition.
    pub fn left_data(&self) -> (f64, f64) {
        match self.left {
            Boundary::Robin(h) => (1.0, h),
            Boundary::Dirichlet => (0.0, 1.0),
        }
    }

    fn rhs(&self, k: usize, lambda: f64, y: f64, w: f64) -> (f64, f64) {
        let [p, q, rho] = self.samples[k];
        (w / p, (q - lambda * rho) * y)
    }
}

/// Grid solution of the initial-value problem: θ and the flux pθ′ at the
/// nodes x_k = k·l/steps.
#[derive(Debug, Clone)]
pub struct Trajectory {
    length: f64,
    values: Vec<f64>,
    flux: Vec<f64>,
    p_nodes: Vec<f64>,
}

impl Trajectory {
    pub fn nodes(&self) -> usize {
        self.values.len()
    }

    pub fn step(&self) -> f64 {
        self.length / (self.values.len() - 1) as f64
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn flux(&self) -> &[f64] {
        &self.flux
    }

    pub fn end_value(&self) -> f64 {
        *self.values.last().expect("non-empty trajectory")
    }

    pub fn end_derivative(&self) -> f64 {
        self.flux.last().copied().unwrap_or(0.0) / self.p_nodes.last().copied().unwrap_or(1.0)
    }

    fn locate(&self, x: f64) -> (usize, f64) {
        let h = self.step();
        let n = self.values.len() - 1;
        let t = (x / h).clamp(0.0, n as f64);
        let i = (t.floor() as usize).min(n - 1);
        (i, t - i as f64)
    }

    /// θ(x) by cubic Hermite interpolation of the grid solution.
    pub fn value(&self, x: f64) -> f64 {
        let (i, s) = self.locate(x);
        let h = self.step();
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (d0, d1) = (self.flux[i] / self.p_nodes[i], self.flux[i + 1] / self.p_nodes[i + 1]);
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1
    }

    /// θ′(x) from the derivative of the Hermite interpolant.
    pub fn derivative(&self, x: f64) -> f64 {
        let (i, s) = self.locate(x);
        let h = self.step();
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (d0, d1) = (self.flux[i] / self.p_nodes[i], self.flux[i + 1] / self.p_nodes[i + 1]);
        let dh00 = 6.0 * s * (s - 1.0);
        let dh10 = (1.0 - s) * (1.0 - 3.0 * s);
        let dh01 = -dh00;
        let dh11 = s * (3.0 * s - 2.0);
        (dh00 * y0 + dh01 * y1) / h + dh10 * d0 + dh11 * d1
    }

    fn scaled(mut self, c: f64) -> Self {
        self.values.iter_mut().for_each(|v| *v *= c);
        self.flux.iter_mut().for_each(|v| *v *= c);
        self
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda.is_finite() {
        Ok(())
    } else {
        Err(domain("solve_theta", format!("eigenvalue parameter must be finite, got {lambda}")))
    }
}

/// Solve −(pθ′)′ + qθ = λρθ with θ(0) = a, θ′(0) = b by RK4 on the
/// problem's grid.
pub fn solve_theta(problem: &SlProblem, lambda: f64, a: f64, b: f64) -> Result<Trajectory> {
    check_lambda(lambda)?;
    let n = problem.steps;
    let h = problem.h();
    let mut values = Vec::with_capacity(n + 1);
    let mut flux = Vec::with_capacity(n + 1);
    let mut y = a;
    let mut w = problem.samples[0][0] * b;
    values.push(y);
    flux.push(w);
    for i in 0..n {
        let k0 = 2 * i;
        let (a1, b1) = problem.rhs(k0, lambda, y, w);
        let (a2, b2) = problem.rhs(k0 + 1, lambda, y + 0.5 * h * a1, w + 0.5 * h * b1);
        let (a3, b3) = problem.rhs(k0 + 1, lambda, y + 0.5 * h * a2, w + 0.5 * h * b2);
        let (a4, b4) = problem.rhs(k0 + 2, lambda, y + h * a3, w + h * b3);
        y += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
        w += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
        values.push(y);
        flux.push(w);
    }
    Ok(Trajectory {
        length: problem.length,
        values,
        flux,
        p_nodes: (0..=n).map(|i| problem.samples[2 * i][0]).collect(),
    })
}

/// Fourth-order cumulative integral ∫₀^{x_i} g on a uniform grid.
fn cumulative(g: &[f64], h: f64) -> Vec<f64> {
    let n = g.len() - 1;
    let mut out = vec![0.0; n + 1];
    for i in 0..n {
        let piece = if n < 3 {
            0.5 * h * (g[i] + g[i + 1])
        } else if i == 0 {
            h / 24.0 * (9.0 * g[0] + 19.0 * g[1] - 5.0 * g[2] + g[3])
        } else if i == n - 1 {
            h / 24.0 * (9.0 * g[n] + 19.0 * g[n - 1] - 5.0 * g[n - 2] + g[n - 3])
        } else {
            h / 24.0 * (-g[i - 1] + 13.0 * g[i] + 13.0 * g[i + 1] - g[i + 2])
        };
        out[i + 1] = out[i] + piece;
    }
    out
}

/// Successive approximations of the Volterra equation
///
/// ```text
/// f(x) = a + b ∫₀ˣ p(0)/p + ∫₀ˣ K_λ(x, x′) f(x′) dx′,
/// K_λ(x, x′) = [q(x′) − λρ(x′)] ∫_{x′}^{x} dx″/p(x″),
/// ```
///
/// iterated until successive iterates differ by less than `1e-12` in max
/// norm (or 2000 sweeps). Independent of [`solve_theta`]; meant as a
/// cross-check.
pub fn solve_theta_picard(problem: &SlProblem, lambda: f64, a: f64, b: f64) -> Result<Trajectory> {
    check_lambda(lambda)?;
    let n = problem.steps;
    let h = problem.h();
    let nodes: Vec<[f64; 3]> = (0..=n).map(|i| problem.samples[2 * i]).collect();
    let inv_p: Vec<f64> = nodes.iter().map(|s| 1.0 / s[0]).collect();
    let big_p = cumulative(&inv_p, h);
    let p0 = nodes[0][0];
    let f0: Vec<f64> = big_p.iter().map(|&pp| a + b * p0 * pp).collect();
    let coef: Vec<f64> = nodes.iter().map(|s| s[1] - lambda * s[2]).collect();
    let mut f = f0.clone();
    let mut g1 = vec![0.0; n + 1];
    for _ in 0..2000 {
        let g: Vec<f64> = coef.iter().zip(&f).map(|(c, v)| c * v).collect();
        let pg: Vec<f64> = g.iter().zip(&big_p).map(|(v, pp)| v * pp).collect();
        g1 = cumulative(&g, h);
        let g2 = cumulative(&pg, h);
        let next: Vec<f64> = (0..=n).map(|i| f0[i] + big_p[i] * g1[i] - g2[i]).collect();
        let diff = next.iter().zip(&f).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        let scale = next.iter().map(|v| v.abs()).fold(1.0, f64::max);
        f = next;
        if diff < 1e-12 * scale {
            break;
        }
    }
    let flux: Vec<f64> = g1.iter().map(|v| b * p0 + v).collect();
    Ok(Trajectory {
        length: problem.length,
        values: f,
        flux,
        p_nodes: nodes.iter().map(|s| s[0]).collect(),
    })
}

/// Characteristic function m(λ): the right boundary residual of the solution
/// that satisfies the left condition. Its zeros are the eigenvalues.
pub fn characteristic(problem: &SlProblem, lambda: f64) -> Result<f64> {
    let (a, b) = problem.left_data();
    let t = solve_theta(problem, lambda, a, b)?;
    Ok(residual_at_right(problem, &t))
}

fn residual_at_right(problem: &SlProblem, t: &Trajectory) -> f64 {
    match problem.right {
        Boundary::Dirichlet => t.end_value(),
        Boundary::Robin(h2) => t.end_derivative() + h2 * t.end_value(),
    }
}

/// Scale for the modified Prüfer angle, tan Θ = S·θ/(pθ′).
fn prufer_scale(problem: &SlProblem, lambda: f64) -> f64 {
    let b = problem.bounds;
    let pm = 0.5 * (b.p_min + b.p_max);
    let rm = 0.5 * (b.rho_min + b.rho_max);
    let l = problem.length;
    (lambda.abs() * rm * pm).sqrt().max(pm / l)
}

/// Phase Θ(l; λ) of the left-normalised solution, integrated from
/// Θ′ = (S/p) cos²Θ + ((λρ − q)/S) sin²Θ. Zeros of θ sit where Θ ∈ πℤ.
pub fn phase_at_end(problem: &SlProblem, lambda: f64) -> Result<f64> {
    Ok(phase_profile(problem, lambda)?.1)
}

/// (Θ at the last interior node, Θ(l)).
fn phase_profile(problem: &SlProblem, lambda: f64) -> Result<(f64, f64)> {
    check_lambda(lambda)?;
    let s = prufer_scale(problem, lambda);
    let (a, b) = problem.left_data();
    let p0 = problem.samples[0][0];
    let mut th = (s * a).atan2(p0 * b);
    let h = problem.h();
    let rate = |k: usize, t: f64| {
        let [p, q, rho] = problem.samples[k];
        let (sn, cs) = t.sin_cos();
        s / p * cs * cs + (lambda * rho - q) / s * sn * sn
    };
    let mut before = th;
    for i in 0..problem.steps {
        before = th;
        let k0 = 2 * i;
        let k1 = rate(k0, th);
        let k2 = rate(k0 + 1, th + 0.5 * h * k1);
        let k3 = rate(k0 + 1, th + 0.5 * h * k2);
        let k4 = rate(k0 + 2, th + h * k3);
        th += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    Ok((before, th))
}

/// Target phase at x = l for the first eigenvalue; the n-th sits at
/// `target + (n − 1)π`.
fn right_target(problem: &SlProblem, lambda: f64) -> f64 {
    match problem.right {
        Boundary::Dirichlet => PI,
        Boundary::Robin(h2) => {
            let s = prufer_scale(problem, lambda);
            let pl = problem.samples[2 * problem.steps][0];
            PI - s.atan2(pl * h2)
        }
    }
}

/// Number of zeros of θ(·; λ) in the open interval (0, l).
pub fn node_count(problem: &SlProblem, lambda: f64) -> Result<usize> {
    if lambda <= 0.0 && problem.bounds.q_min >= 0.0 {
        // θ stays monotone for λ ≤ 0 with q ≥ 0 and h ≥ 0
        check_lambda(lambda)?;
        return Ok(0);
    }
    let th = phase_at_end(problem, lambda)?;
    Ok(nodes_from_phase(th))
}

fn nodes_from_phase(th: f64) -> usize {
    if th <= 0.0 {
        0
    } else {
        ((th / PI).ceil() as usize).saturating_sub(1)
    }
}

/// Ordered eigenpairs with ρ-normalised eigenfunctions.
#[derive(Debug, Clone)]
pub struct EigenBasis {
    pub eigenvalues: Vec<f64>,
    pub eigenfunctions: Vec<Trajectory>,
    pub node_counts: Vec<usize>,
    /// C_n: factor turning the left-normalised θ(x; λ_n) into X_n.
    pub norm_constants: Vec<f64>,
    pub length: f64,
}

impl EigenBasis {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// X_n(x), n 1-based.
    pub fn eval(&self, n: usize, x: f64) -> f64 {
        self.eigenfunctions[n - 1].value(x)
    }

    pub fn eval_derivative(&self, n: usize, x: f64) -> f64 {
        self.eigenfunctions[n - 1].derivative(x)
    }

    /// ⟨X_n, f⟩_ρ by composite Gauss–Legendre quadrature.
    pub fn project(&self, problem: &SlProblem, n: usize, f: &dyn Fn(f64) -> f64) -> f64 {
        weighted_inner(problem, |x| self.eval(n, x) * f(x))
    }
}

fn weighted_inner(problem: &SlProblem, g: impl Fn(f64) -> f64) -> f64 {
    let gl = GaussLegendre::new(8);
    let panels = problem.steps / 4;
    gl.composite(|x| problem.rho(x) * g(x), 0.0, problem.length, panels)
}

fn bracket_failure(index: usize, lo: f64, hi: f64) -> Error {
    Error::Bracket { index, lo, hi }
}

/// Locate the n-th eigenvalue (1-based).
pub fn eigenvalue(problem: &SlProblem, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(domain("eigenvalue", "eigenvalue index is 1-based"));
    }
    let offset = (n - 1) as f64 * PI;
    let phase_gap = |lam: f64| -> Result<f64> { Ok(phase_at_end(problem, lam)? - right_target(problem, lam) - offset) };
    let (mut lo, mut hi) = problem.bounds.eigenvalue_window(n, problem.length);
    let margin = 1e-9 * hi.abs().max(1.0);
    lo -= margin;
    hi += margin;
    let mut expansions = 0;
    loop {
        let glo = phase_gap(lo)?;
        let ghi = phase_gap(hi)?;
        if glo <= 0.0 && ghi >= 0.0 {
            break;
        }
        if expansions == 6 {
            return Err(bracket_failure(n, lo, hi));
        }
        let width = (hi - lo).max(1.0);
        if glo > 0.0 {
            lo -= width;
        }
        if ghi < 0.0 {
            hi += width;
        }
        expansions += 1;
    }
    // shrink on the phase until the bracket holds a single crossing of m
    let mut plo = phase_at_end(problem, lo)?;
    let mut phi = phase_at_end(problem, hi)?;
    let mut guard = 0;
    while phi - plo > 0.5 * PI && guard < 200 {
        let mid = 0.5 * (lo + hi);
        if phase_gap(mid)? < 0.0 {
            lo = mid;
            plo = phase_at_end(problem, lo)?;
        } else {
            hi = mid;
            phi = phase_at_end(problem, hi)?;
        }
        guard += 1;
    }
    let m = |lam: f64| characteristic(problem, lam).unwrap_or(f64::NAN);
    let (mut mlo, mut mhi) = (m(lo), m(hi));
    // the phase and the characteristic come from different integrations; if
    // the crossing sits right at an end, widen that end a little
    for _ in 0..8 {
        if mlo.signum() != mhi.signum() || mlo == 0.0 || mhi == 0.0 {
            break;
        }
        if phase_at_end(problem, hi)? - phase_at_end(problem, lo)? > 0.9 * PI {
            return Err(bracket_failure(n, lo, hi));
        }
        let w = 0.25 * (hi - lo);
        if phase_gap(hi)?.abs() < phase_gap(lo)?.abs() {
            hi += w;
            mhi = m(hi);
        } else {
            lo -= w;
            mlo = m(lo);
        }
    }
    if mlo == 0.0 {
        return Ok(lo);
    }
    if mhi == 0.0 {
        return Ok(hi);
    }
    if mlo.signum() == mhi.signum() {
        return Err(bracket_failure(n, lo, hi));
    }
    let scale = characteristic_scale(problem, 0.5 * (lo + hi));
    bisect_secant(
        m,
        lo,
        hi,
        RootTol {
            f_abs: 1e-10 * scale,
            x_abs: 1e-15 * hi.abs().max(1.0),
            max_iter: 200,
        },
    )
    .map_err(|_| bracket_failure(n, lo, hi))
}

/// Natural size of m(λ) near λ: |θ′| ~ √(λρ/p)·|θ| for oscillatory solutions.
fn characteristic_scale(problem: &SlProblem, lambda: f64) -> f64 {
    let b = problem.bounds;
    let freq = (lambda.abs() * b.rho_max / b.p_min).sqrt();
    match (problem.left, problem.right) {
        (Boundary::Dirichlet, Boundary::Dirichlet) => 1.0 / freq.max(1.0),
        (Boundary::Dirichlet, _) => 1.0,
        (_, Boundary::Dirichlet) => 1.0,
        _ => freq.max(1.0),
    }
}

/// First `n_max` eigenpairs.
pub fn eigen_solve(problem: &SlProblem, n_max: usize) -> Result<EigenBasis> {
    eigen_solve_with(problem, n_max, Exec::default())
}

/// [`eigen_solve`] with an explicit execution mode; eigenvalues are
/// independent so each index is solved on its own.
pub fn eigen_solve_with(problem: &SlProblem, n_max: usize, exec: Exec) -> Result<EigenBasis> {
    if n_max == 0 {
        return Err(domain("eigen_solve", "n_max must be at least 1"));
    }
    let pairs: Vec<Result<(f64, Trajectory, usize, f64)>> = par::map_indexed(exec, n_max, |i| {
        let n = i + 1;
        let lam = eigenvalue(problem, n)?;
        let (a, b) = problem.left_data();
        let raw = solve_theta(problem, lam, a, b)?;
        let h = raw.step();
        let weighted: Vec<f64> = raw
            .values
            .iter()
            .enumerate()
            .map(|(k, v)| problem.samples[2 * k][2] * v * v)
            .collect();
        let norm2 = simpson_samples(&weighted, h);
        let c = 1.0 / norm2.sqrt();
        // zeros strictly inside: read the phase one step short of l
        let nodes = (phase_profile(problem, lam)?.0 / PI).floor().max(0.0) as usize;
        Ok((lam, raw.scaled(c), nodes, c))
    });
    let mut basis = EigenBasis {
        eigenvalues: Vec::with_capacity(n_max),
        eigenfunctions: Vec::with_capacity(n_max),
        node_counts: Vec::with_capacity(n_max),
        norm_constants: Vec::with_capacity(n_max),
        length: problem.length,
    };
    for r in pairs {
        let (lam, f, nodes, c) = r?;
        basis.eigenvalues.push(lam);
        basis.eigenfunctions.push(f);
        basis.node_counts.push(nodes);
        basis.norm_constants.push(c);
    }
    Ok(basis)
}

/// Closed-form Dirichlet eigenvalues of −μX″ + qX = zρX on [x₁, x₂]:
/// z_n = (μπ²n²/(x₂−x₁)² + q)/ρ, n = 1..=count.
pub fn const_coeff_eigen(mu: f64, q: f64, rho: f64, x1: f64, x2: f64, count: usize) -> Result<Vec<f64>> {
    if !(x2 > x1) {
        return Err(domain("const_coeff_eigen", format!("need x2 > x1, got [{x1}, {x2}]")));
    }
    if !(rho > 0.0) {
        return Err(domain("const_coeff_eigen", format!("rho must be positive, got {rho}")));
    }
    let d = x2 - x1;
    Ok((1..=count)
        .map(|n| {
            let nf = n as f64;
            (mu * PI * PI * nf * nf / (d * d) + q) / rho
        })
        .collect())
}

/// Rayleigh quotient Π[f]/K[f]. When `df` is omitted the derivative is taken
/// by a five-point central difference.
pub fn rayleigh_quotient(
    problem: &SlProblem,
    f: &dyn Fn(f64) -> f64,
    df: Option<&dyn Fn(f64) -> f64>,
) -> Result<f64> {
    let l = problem.length;
    let step = 1e-3 * l;
    let fd = |x: f64| {
        // one-sided stencils keep every sample inside [0, l]
        let s = if x < 2.0 * step {
            step
        } else if x > l - 2.0 * step {
            -step
        } else {
            return (-f(x + 2.0 * step) + 8.0 * f(x + step) - 8.0 * f(x - step) + f(x - 2.0 * step)) / (12.0 * step);
        };
        (-25.0 * f(x) + 48.0 * f(x + s) - 36.0 * f(x + 2.0 * s) + 16.0 * f(x + 3.0 * s) - 3.0 * f(x + 4.0 * s))
            / (12.0 * s)
    };
    let deriv = |x: f64| match df {
        Some(d) => d(x),
        None => fd(x),
    };
    let gl = GaussLegendre::new(8);
    let panels = 256;
    let stiff = gl.composite(|x| problem.p(x) * deriv(x).powi(2) + problem.q(x) * f(x).powi(2), 0.0, l, panels);
    let mass = gl.composite(|x| problem.rho(x) * f(x).powi(2), 0.0, l, panels);
    if !(mass > 0.0) {
        return Err(domain("rayleigh_quotient", "trial function has zero weighted norm"));
    }
    let mut num = stiff;
    if let Some(h1) = problem.left.robin_h() {
        num += h1 * problem.p(0.0) * f(0.0).powi(2);
    }
    if let Some(h2) = problem.right.robin_h() {
        num += h2 * problem.p(l) * f(l).powi(2);
    }
    Ok(num / mass)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dirichlet_unit() -> SlProblem {
        SlProblem::constant(1.0, 0.0, 1.0, 1.0, Boundary::Dirichlet, Boundary::Dirichlet).unwrap()
    }

    #[test]
    fn theta_closed_forms() {
        let pr = dirichlet_unit();
        let lam = PI * PI;
        let t = solve_theta(&pr, lam, 0.0, 1.0).unwrap();
        assert!(t.end_value().abs() < 1e-12);
        for &x in &[0.13, 0.5, 0.77] {
            assert!((t.value(x) - (PI * x).sin() / PI).abs() < 1e-12);
        }
        let t0 = solve_theta(&pr, 0.0, 0.3, -2.0).unwrap();
        for &x in &[0.0, 0.25, 1.0] {
            assert!((t0.value(x) - (0.3 - 2.0 * x)).abs() < 1e-14);
        }
    }

    #[test]
    fn theta_rejects_nonfinite_lambda() {
        assert!(solve_theta(&dirichlet_unit(), f64::NAN, 0.0, 1.0).is_err());
        assert!(characteristic(&dirichlet_unit(), f64::INFINITY).is_err());
    }

    #[test]
    fn picard_agrees_with_rk4() {
        let pr = SlProblem::new(
            crate::func(|x| 1.0 + x),
            crate::func(|x| x),
            crate::func(|_| 1.0),
            1.0,
            Boundary::NEUMANN,
            Boundary::NEUMANN,
        )
        .unwrap();
        let a = solve_theta(&pr, 3.0, 1.0, 0.0).unwrap();
        let b = solve_theta_picard(&pr, 3.0, 1.0, 0.0).unwrap();
        assert!((a.end_value() - b.end_value()).abs() < 1e-9 * a.end_value().abs());
        assert!((a.end_derivative() - b.end_derivative()).abs() < 1e-8);
    }

    #[test]
    fn free_ends_characteristic() {
        let pr = SlProblem::constant(1.0, 0.0, 1.0, 2.0, Boundary::NEUMANN, Boundary::NEUMANN).unwrap();
        for &lam in &[0.3, 1.7, 5.0] {
            let s = f64::sqrt(lam);
            let m = characteristic(&pr, lam).unwrap();
            assert!((m + s * (s * 2.0).sin()).abs() < 1e-10);
        }
        let bracket = characteristic(&pr, PI * PI / 4.0).unwrap();
        assert!(bracket.abs() < 1e-10);
    }

    #[test]
    fn node_count_basics() {
        let pr = dirichlet_unit();
        assert_eq!(node_count(&pr, -5.0).unwrap(), 0);
        assert_eq!(node_count(&pr, 0.0).unwrap(), 0);
        for k in 1..6 {
            let lam = (k as f64 * PI).powi(2) + 1e-6;
            assert_eq!(node_count(&pr, lam).unwrap(), k);
            let lam = (k as f64 * PI).powi(2) - 1e-6;
            assert_eq!(node_count(&pr, lam).unwrap(), k - 1);
        }
    }

    #[test]
    fn dirichlet_spectrum() {
        let pr = dirichlet_unit();
        let basis = eigen_solve(&pr, 5).unwrap();
        for (i, lam) in basis.eigenvalues.iter().enumerate() {
            let n = (i + 1) as f64;
            assert!((lam - (n * PI).powi(2)).abs() < 1e-8 * lam);
            assert_eq!(basis.node_counts[i], i);
            for &x in &[0.1, 0.35, 0.9] {
                let want = 2f64.sqrt() * (n * PI * x).sin();
                assert!((basis.eval(i + 1, x) - want).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn invalid_problems_rejected() {
        assert!(SlProblem::constant(0.0, 0.0, 1.0, 1.0, Boundary::Dirichlet, Boundary::Dirichlet).is_err());
        assert!(SlProblem::constant(1.0, -1.0, 1.0, 1.0, Boundary::Dirichlet, Boundary::Dirichlet).is_err());
        assert!(SlProblem::constant(1.0, 0.0, 1.0, 1.0, Boundary::Robin(-1.0), Boundary::Dirichlet).is_err());
        assert!(SlProblem::constant(1.0, 0.0, 1.0, -1.0, Boundary::Dirichlet, Boundary::Dirichlet).is_err());
        assert!(eigen_solve(&dirichlet_unit(), 0).is_err());
    }

    #[test]
    fn constant_coefficient_formula() {
        let z = const_coeff_eigen(2.0, 3.0, 1.0, 0.0, PI, 4).unwrap();
        for (i, v) in z.iter().enumerate() {
            let n = (i + 1) as f64;
            assert!((v - (2.0 * n * n + 3.0)).abs() < 1e-12);
        }
        let a = const_coeff_eigen(1.0, 0.5, 2.0, 3.0, 4.5, 3).unwrap();
        let b = const_coeff_eigen(1.0, 0.5, 2.0, -1.0, 0.5, 3).unwrap();
        assert_eq!(a, b);
        assert!(const_coeff_eigen(1.0, 0.0, 1.0, 1.0, 1.0, 3).is_err());
    }

    #[test]
    fn rayleigh_values() {
        let pr = dirichlet_unit();
        let f = |x: f64| x * (1.0 - x);
        let v = rayleigh_quotient(&pr, &f, None).unwrap();
        assert!((v - 10.0).abs() < 1e-8);
        let s = |x: f64| (PI * x).sin();
        let v = rayleigh_quotient(&pr, &s, None).unwrap();
        assert!((v - PI * PI).abs() < 1e-8);
        let zero = |_: f64| 0.0;
        assert!(rayleigh_quotient(&pr, &zero, None).is_err());
    }
}
