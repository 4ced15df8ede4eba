//! Separable problems in two and three dimensions: rectangular and circular
//! membranes, the finite cylinder and the ball.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::par::{self, Exec};
use crate::quad::{gauss_kronrod, gauss_kronrod_points, GaussLegendre};
use crate::specfun::{
    assoc_legendre, assoc_legendre_norm_sq, bessel_j, bessel_j_prime, legendre_p, spherical_j, zero_table, ZeroFamily,
};
use crate::sturm::Boundary;
use crate::waves1d::ModeShapes;

fn positive(what: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidProblem(format!("{what} must be positive and finite, got {v}")))
    }
}

fn uniform_breaks(a: f64, b: f64, pieces: usize) -> Vec<f64> {
    (0..=pieces).map(|j| a + (b - a) * j as f64 / pieces as f64).collect()
}

/// Edge condition of a rectangular membrane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Edge {
    Fixed,
    Free,
}

impl Edge {
    fn boundary(self) -> Boundary {
        match self {
            Edge::Fixed => Boundary::Dirichlet,
            Edge::Free => Boundary::NEUMANN,
        }
    }
}

/// Membrane 0 ≤ x ≤ l₁, 0 ≤ y ≤ l₂. Edges are ordered x = 0, x = l₁, y = 0, y = l₂.
#[derive(Debug, Clone)]
pub struct RectMembrane {
    pub l1: f64,
    pub l2: f64,
    pub edges: [Edge; 4],
    pub a: f64,
    pub rho: f64,
    sx: ModeShapes,
    sy: ModeShapes,
}

/// One product mode X_m(x)Y_n(y).
#[derive(Debug, Clone)]
pub struct RectMode {
    pub m: usize,
    pub n: usize,
    pub lambda: f64,
    pub omega: f64,
    sx: ModeShapes,
    sy: ModeShapes,
}

impl RectMode {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.sx.eval(self.m, x) * self.sy.eval(self.n, y)
    }
}

impl RectMembrane {
    pub fn new(l1: f64, l2: f64, edges: [Edge; 4], a: f64, rho: f64) -> Result<Self> {
        positive("l1", l1)?;
        positive("l2", l2)?;
        positive("wave speed", a)?;
        positive("density", rho)?;
        let sx = ModeShapes::new(l1, edges[0].boundary(), edges[1].boundary(), 1)?;
        let sy = ModeShapes::new(l2, edges[2].boundary(), edges[3].boundary(), 1)?;
        Ok(Self { l1, l2, edges, a, rho, sx, sy })
    }

    /// All four edges fixed.
    pub fn fixed(l1: f64, l2: f64, a: f64, rho: f64) -> Result<Self> {
        Self::new(l1, l2, [Edge::Fixed; 4], a, rho)
    }

    pub fn eigenvalue(&self, m: usize, n: usize) -> f64 {
        self.sx.wavenumber(m).powi(2) + self.sy.wavenumber(n).powi(2)
    }

    pub fn mode(&self, m: usize, n: usize) -> Result<RectMode> {
        if m == 0 || n == 0 {
            return Err(domain("rect_membrane_mode", "mode indices are 1-based"));
        }
        let lambda = self.eigenvalue(m, n);
        Ok(RectMode {
            m,
            n,
            lambda,
            omega: self.a * lambda.sqrt(),
            sx: self.sx.clone(),
            sy: self.sy.clone(),
        })
    }

    /// 2·k·l/π as an integer: the wavenumber on a half-integer grid.
    fn doubled_index(shapes: &ModeShapes, n: usize) -> u128 {
        let n = n as u128;
        match shapes {
            ModeShapes::FixedFixed { .. } => 2 * n,
            ModeShapes::FreeFree { .. } => 2 * (n - 1),
            _ => 2 * n - 1,
        }
    }

    /// Other index pairs up to `max_index` sharing the eigenvalue of (m, n).
    pub fn degenerate_partners(&self, m: usize, n: usize, max_index: usize) -> Vec<(usize, usize)> {
        let ratio = (self.l2 / self.l1).powi(2);
        let exact = rational_approx(ratio, 10_000, 1e-12);
        let key = |i: usize, j: usize| -> (u128, f64) {
            let (si, sj) = (Self::doubled_index(&self.sx, i), Self::doubled_index(&self.sy, j));
            match exact {
                Some((p, q)) => (si * si * p + sj * sj * q, 0.0),
                None => (0, self.eigenvalue(i, j)),
            }
        };
        let target = key(m, n);
        let mut out = Vec::new();
        for i in 1..=max_index {
            for j in 1..=max_index {
                if (i, j) == (m, n) {
                    continue;
                }
                let k = key(i, j);
                let same = match exact {
                    Some(_) => k.0 == target.0,
                    None => (k.1 - target.1).abs() <= 1e-12 * target.1.abs().max(1e-300),
                };
                if same {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// The `count` lowest modes with indices up to `count`, ordered by λ then (m, n).
    pub fn spectrum(&self, count: usize) -> Vec<RectMode> {
        let mut pairs: Vec<(usize, usize)> = (1..=count).flat_map(|m| (1..=count).map(move |n| (m, n))).collect();
        pairs.sort_by(|a, b| self.eigenvalue(a.0, a.1).total_cmp(&self.eigenvalue(b.0, b.1)).then(a.cmp(b)));
        pairs.truncate(count);
        pairs.into_iter().map(|(m, n)| self.mode(m, n).expect("indices are 1-based")).collect()
    }
}

/// p/q with q ≤ max_den and |x − p/q| ≤ tol·x, by continued fractions.
fn rational_approx(x: f64, max_den: u128, tol: f64) -> Option<(u128, u128)> {
    if !(x > 0.0) {
        return None;
    }
    let (mut h0, mut h1, mut k0, mut k1) = (0u128, 1u128, 1u128, 0u128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a > 1e15 {
            break;
        }
        let ai = a as u128;
        let (h2, k2) = (ai * h1 + h0, ai * k1 + k0);
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x - h1 as f64 / k1 as f64).abs() <= tol * x {
            return Some((h1, k1));
        }
        let frac = r - a;
        if frac <= 0.0 {
            break;
        }
        r = 1.0 / frac;
    }
    None
}

/// Angular factor of a disk mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Cos,
    Sin,
}

/// Circular membrane of radius R with a fixed edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskMembrane {
    pub radius: f64,
    pub a: f64,
    pub rho: f64,
}

impl DiskMembrane {
    pub fn new(radius: f64, a: f64, rho: f64) -> Result<Self> {
        positive("radius", radius)?;
        positive("wave speed", a)?;
        positive("density", rho)?;
        Ok(Self { radius, a, rho })
    }
}

/// Normalized mode J_m(α_k r/R)·{cos, sin}(mφ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskMode {
    pub m: u32,
    pub k: usize,
    pub parity: Parity,
    pub alpha: f64,
    pub lambda: f64,
    pub omega: f64,
    pub radius: f64,
    norm: f64,
}

impl DiskMode {
    /// Radial part normalized with weight r on [0, R].
    pub fn radial(&self, r: f64) -> f64 {
        let root2 = std::f64::consts::SQRT_2;
        root2 / (self.radius * bessel_j_prime(self.m, self.alpha).abs()) * bessel_j(self.m, self.alpha * r / self.radius)
    }

    pub fn eval(&self, r: f64, phi: f64) -> f64 {
        let ang = match self.parity {
            Parity::Cos => (self.m as f64 * phi).cos(),
            Parity::Sin => (self.m as f64 * phi).sin(),
        };
        self.norm * self.radial(r) * ang
    }
}

pub fn disk_membrane_mode(disk: &DiskMembrane, m: u32, k: usize, parity: Parity) -> Result<DiskMode> {
    if k == 0 {
        return Err(domain("disk_membrane_mode", "radial index is 1-based"));
    }
    if m == 0 && parity == Parity::Sin {
        return Err(domain("disk_membrane_mode", "m = 0 has no sine mode"));
    }
    let alpha = zero_table(ZeroFamily::BesselJ, m, k)?.roots[k - 1];
    let lambda = (alpha / disk.radius).powi(2);
    let norm = if m == 0 { 1.0 / (2.0 * PI).sqrt() } else { 1.0 / PI.sqrt() };
    Ok(DiskMode {
        m,
        k,
        parity,
        alpha,
        lambda,
        omega: disk.a * alpha / disk.radius,
        radius: disk.radius,
        norm,
    })
}

/// ∫₀^R f(r) J_m(α r/R) r dr split into panels that follow the oscillation.
fn hankel_moment(f: &(dyn Fn(f64) -> f64 + Sync), m: u32, alpha: f64, radius: f64, k: usize) -> f64 {
    let breaks = uniform_breaks(0.0, radius, k + 1);
    gauss_kronrod_points(|r| f(r) * bessel_j(m, alpha * r / radius) * r, &breaks, 1e-14, 1e-12).value
}

/// Axisymmetric free vibration Σ [A_k cos ω_k t + B_k sin ω_k t] J₀(α_k r/R).
#[derive(Debug, Clone)]
pub struct DiskAxisym {
    pub disk: DiskMembrane,
    pub alphas: Vec<f64>,
    pub cos_coef: Vec<f64>,
    pub sin_coef: Vec<f64>,
}

impl DiskAxisym {
    pub fn new(
        disk: DiskMembrane,
        u0: &(dyn Fn(f64) -> f64 + Sync),
        v0: &(dyn Fn(f64) -> f64 + Sync),
        n: usize,
    ) -> Result<Self> {
        if n == 0 {
            return Err(domain("disk_axisym", "truncation must be at least 1"));
        }
        let alphas = zero_table(ZeroFamily::BesselJ, 0, n)?.roots[..n].to_vec();
        let rr = disk.radius;
        let coef = |g: &(dyn Fn(f64) -> f64 + Sync), i: usize| {
            let al = alphas[i];
            2.0 / (rr * rr * bessel_j(1, al).powi(2)) * hankel_moment(g, 0, al, rr, i + 1)
        };
        let cos_coef = par::map_indexed(Exec::default(), n, |i| coef(u0, i));
        let sin_coef = par::map_indexed(Exec::default(), n, |i| coef(v0, i) * rr / (disk.a * alphas[i]));
        Ok(Self {
            disk,
            alphas,
            cos_coef,
            sin_coef,
        })
    }

    pub fn value(&self, r: f64, t: f64) -> f64 {
        let rr = self.disk.radius;
        par::sum_indexed(Exec::Sequential, self.alphas.len(), |i| {
            let w = self.disk.a * self.alphas[i] / rr;
            (self.cos_coef[i] * (w * t).cos() + self.sin_coef[i] * (w * t).sin()) * bessel_j(0, self.alphas[i] * r / rr)
        })
    }
}

pub fn disk_axisym_solution(
    disk: DiskMembrane,
    u0: &(dyn Fn(f64) -> f64 + Sync),
    v0: &(dyn Fn(f64) -> f64 + Sync),
    n: usize,
    r: f64,
    t: f64,
) -> Result<f64> {
    Ok(DiskAxisym::new(disk, u0, v0, n)?.value(r, t))
}

/// Response to an axisymmetric pressure F(r, t) from rest, by Duhamel's
/// integral on each radial mode.
pub fn disk_forced_axisym(
    disk: DiskMembrane,
    pressure: &(dyn Fn(f64, f64) -> f64 + Sync),
    n: usize,
    r: f64,
    t: f64,
) -> Result<f64> {
    if n == 0 {
        return Err(domain("disk_forced_axisym", "truncation must be at least 1"));
    }
    if t <= 0.0 {
        return Ok(0.0);
    }
    let rr = disk.radius;
    let alphas = zero_table(ZeroFamily::BesselJ, 0, n)?;
    let terms = par::map_indexed(Exec::default(), n, |i| {
        let al = alphas.roots[i];
        let w = disk.a * al / rr;
        let scale = std::f64::consts::SQRT_2 / (rr * bessel_j(1, al).abs());
        let p_k = |tau: f64| scale * hankel_moment(&|x| pressure(x, tau), 0, al, rr, i + 1) / disk.rho;
        let panels = ((w * t / PI).ceil() as usize + 1).min(4000);
        let breaks = uniform_breaks(0.0, t, panels);
        let q = gauss_kronrod_points(|tau| (w * (t - tau)).sin() / w * p_k(tau), &breaks, 1e-14, 1e-11).value;
        q * scale * bessel_j(0, al * r / rr)
    });
    Ok(par::pairwise_sum(&terms))
}

/// Steady amplitude A(r) of the response A(r) sin ωt to a uniform pressure P₀ sin ωt.
pub fn disk_pressure_amplitude(disk: DiskMembrane, p0: f64, omega: f64, r: f64) -> Result<f64> {
    positive("frequency", omega)?;
    let z = omega * disk.radius / disk.a;
    let j0 = bessel_j(0, z);
    if j0.abs() < 1e-12 {
        let table = zero_table(ZeroFamily::BesselJ, 0, (z / PI) as usize + 2)?;
        let (mode, alpha) = table
            .roots
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - z).abs().total_cmp(&(b.1 - z).abs()))
            .map(|(i, a)| (i + 1, *a))
            .expect("table is non-empty");
        let omega_n = disk.a * alpha / disk.radius;
        return Err(Error::Resonance {
            omega,
            mode,
            omega_n,
            rel: ((omega - omega_n) / omega_n).abs(),
        });
    }
    Ok(p0 / (disk.rho * omega * omega) * (bessel_j(0, omega * r / disk.a) / j0 - 1.0))
}

/// Initial temperature of a cylinder.
#[derive(Clone, Copy)]
pub enum CylinderInit<'a> {
    Uniform(f64),
    Radial(&'a (dyn Fn(f64) -> f64 + Sync)),
    /// T₀(r, z) with −H/2 ≤ z ≤ H/2.
    Full(&'a (dyn Fn(f64, f64) -> f64 + Sync)),
}

/// Cylinder r ≤ R, |z| ≤ H/2 with zero surface temperature; `height: None`
/// is the infinitely long rod.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderSpec {
    pub radius: f64,
    pub height: Option<f64>,
    pub a2: f64,
}

/// Series value with an estimate of the discarded part. `guaranteed` is false
/// when a²t/R² < 1e−4, where the estimate is not a bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoolingEval {
    pub value: f64,
    pub tail_estimate: f64,
    pub guaranteed: bool,
}

/// Cooling of a finite or infinite cylinder. `n_r` radial terms; `n_z` axial
/// cosine terms (and as many sine terms for data without z-symmetry).
pub fn cylinder_cooling(
    spec: CylinderSpec,
    init: CylinderInit<'_>,
    n_r: usize,
    n_z: usize,
    r: f64,
    z: f64,
    t: f64,
) -> Result<CoolingEval> {
    positive("radius", spec.radius)?;
    positive("diffusivity", spec.a2)?;
    if let Some(h) = spec.height {
        positive("height", h)?;
    }
    if n_r == 0 || (spec.height.is_some() && n_z == 0) {
        return Err(domain("cylinder_cooling", "truncation must be at least 1"));
    }
    if !(t >= 0.0) {
        return Err(domain("cylinder_cooling", format!("time must be non-negative, got {t}")));
    }
    let rr = spec.radius;
    let alphas = zero_table(ZeroFamily::BesselJ, 0, n_r)?;
    let alphas = &alphas.roots[..n_r];
    let radial_norm = |al: f64| 2.0 / (rr * rr * bessel_j(1, al).powi(2));
    let radial_decay = |al: f64| (-(al / rr).powi(2) * spec.a2 * t).exp();

    // rows[k][j]: term (k, j) of the double series; columns are axial modes
    let rows: Vec<Vec<f64>> = match (spec.height, init) {
        (None, CylinderInit::Full(_)) => {
            return Err(Error::InvalidProblem("z-dependent data needs a finite height".into()));
        }
        (None, _) => {
            let c = |k: usize, al: f64| match init {
                CylinderInit::Uniform(t0) => 2.0 * t0 / (al * bessel_j(1, al)),
                CylinderInit::Radial(f) => radial_norm(al) * hankel_moment(f, 0, al, rr, k + 1),
                CylinderInit::Full(_) => unreachable!(),
            };
            par::map_indexed(Exec::default(), n_r, |k| {
                let al = alphas[k];
                vec![c(k, al) * radial_decay(al) * bessel_j(0, al * r / rr)]
            })
        }
        (Some(h), CylinderInit::Uniform(_) | CylinderInit::Radial(_)) => {
            let c = |k: usize, al: f64| match init {
                CylinderInit::Uniform(t0) => 2.0 * t0 / (al * bessel_j(1, al)),
                CylinderInit::Radial(f) => radial_norm(al) * hankel_moment(f, 0, al, rr, k + 1),
                CylinderInit::Full(_) => unreachable!(),
            };
            par::map_indexed(Exec::default(), n_r, |k| {
                let al = alphas[k];
                let ck = c(k, al) * radial_decay(al) * bessel_j(0, al * r / rr);
                (0..n_z)
                    .map(|p| {
                        let nu = PI * (2 * p + 1) as f64 / h;
                        let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
                        ck * 4.0 * sign / (PI * (2 * p + 1) as f64) * (-nu * nu * spec.a2 * t).exp() * (nu * z).cos()
                    })
                    .collect()
            })
        }
        (Some(h), CylinderInit::Full(f)) => {
            let gl = GaussLegendre::new(24);
            let zmodes = 2 * n_z;
            let shape = |n: usize, zz: f64| {
                let nu = PI * n as f64 / h;
                (2.0 / h).sqrt() * if n % 2 == 1 { (nu * zz).cos() } else { (nu * zz).sin() }
            };
            par::map_indexed(Exec::default(), n_r, |k| {
                let al = alphas[k];
                let rpanels = k + 2;
                (1..=zmodes)
                    .map(|n| {
                        let zpanels = n + 2;
                        let inner = |rv: f64| {
                            gl.composite(|zz| f(rv, zz) * shape(n, zz), -h / 2.0, h / 2.0, zpanels)
                                * bessel_j(0, al * rv / rr)
                                * rv
                        };
                        let coef = radial_norm(al) * gl.composite(inner, 0.0, rr, rpanels);
                        let nu = PI * n as f64 / h;
                        coef * radial_decay(al) * (-nu * nu * spec.a2 * t).exp() * bessel_j(0, al * r / rr) * shape(n, z)
                    })
                    .collect()
            })
        }
    };
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    let value = par::pairwise_sum(&flat);
    let last_row: f64 = rows.last().map(|row| row.iter().map(|v| v.abs()).sum()).unwrap_or(0.0);
    let last_col: f64 = rows.iter().map(|row| row.last().map_or(0.0, |v| v.abs())).sum();
    Ok(CoolingEval {
        value,
        tail_estimate: last_row + if rows.first().map_or(0, |r| r.len()) > 1 { last_col } else { 0.0 },
        guaranteed: spec.a2 * t / (rr * rr) >= 1e-4,
    })
}

/// Boundary condition on the ball surface; Robin is u_r + h u = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BallBc {
    Dirichlet,
    Neumann,
    Robin(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallSpec {
    pub radius: f64,
    pub bc: BallBc,
    pub a2: f64,
}

impl BallSpec {
    pub fn new(radius: f64, bc: BallBc, a2: f64) -> Result<Self> {
        positive("radius", radius)?;
        positive("diffusivity", a2)?;
        if let BallBc::Robin(h) = bc {
            positive("Robin coefficient", h)?;
        }
        Ok(Self { radius, bc, a2 })
    }
}

/// Radial mode Φ_k(r) = N_k sin(γ_k r/R)/r, normalized over the ball volume.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallRadialMode {
    pub k: usize,
    pub gamma: f64,
    pub lambda: f64,
    pub norm: f64,
    pub radius: f64,
}

impl BallRadialMode {
    pub fn eval(&self, r: f64) -> f64 {
        let s = self.gamma / self.radius;
        if r.abs() < 1e-8 * self.radius {
            self.norm * s * (1.0 - (s * r).powi(2) / 6.0)
        } else {
            self.norm * (s * r).sin() / r
        }
    }

    /// ∫_ball Φ_k dV.
    pub fn volume_integral(&self) -> f64 {
        let g = self.gamma;
        self.norm * 4.0 * PI * (self.radius / g).powi(2) * (g.sin() - g * g.cos())
    }
}

pub fn ball_radial_mode(spec: &BallSpec, k: usize) -> Result<BallRadialMode> {
    if k == 0 {
        return Err(domain("ball_radial_mode", "radial index is 1-based"));
    }
    let rr = spec.radius;
    let base = 1.0 / (2.0 * PI * rr).sqrt();
    let (gamma, norm) = match spec.bc {
        BallBc::Dirichlet => (PI * k as f64, base),
        BallBc::Neumann => {
            let g = zero_table(ZeroFamily::RadialTan, 0, k)?.roots[k - 1];
            (g, base * (1.0 + g * g).sqrt() / g)
        }
        BallBc::Robin(h) => {
            let hr = h * rr;
            let g = zero_table(ZeroFamily::RadialRobin(hr), 0, k)?.roots[k - 1];
            let c = hr - 1.0;
            (g, base * ((g * g + c * c) / (g * g + c * hr)).sqrt())
        }
    };
    Ok(BallRadialMode {
        k,
        gamma,
        lambda: (gamma / rr).powi(2),
        norm,
        radius: rr,
    })
}

/// Problems on the ball solved by series.
#[derive(Clone, Copy)]
pub enum BallProblem<'a> {
    /// Radially symmetric initial temperature T₀(r).
    Cooling(&'a (dyn Fn(f64) -> f64 + Sync)),
    /// Uniform heat sources of density q from zero initial temperature; κ is the conductivity.
    Sources { q: f64, kappa: f64 },
    /// Initial temperature T₀(r, θ) with a zero surface temperature.
    AxisymCooling(&'a (dyn Fn(f64, f64) -> f64 + Sync)),
    /// Steady temperature with the surface held at T(θ).
    LaplaceDirichlet(&'a (dyn Fn(f64) -> f64 + Sync)),
}

/// Point in spherical coordinates (r, θ); θ is ignored by radial problems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallPoint {
    pub r: f64,
    pub theta: f64,
}

/// Truncated series for the chosen problem. For the axisymmetric problem `n`
/// Legendre orders times `n` radial roots are used.
pub fn ball_solution(spec: &BallSpec, problem: BallProblem<'_>, n: usize, point: BallPoint, t: f64) -> Result<f64> {
    if n == 0 {
        return Err(domain("ball_solution", "truncation must be at least 1"));
    }
    if !(t >= 0.0) {
        return Err(domain("ball_solution", format!("time must be non-negative, got {t}")));
    }
    let rr = spec.radius;
    if !(0.0..=rr).contains(&point.r) {
        return Err(domain("ball_solution", format!("radius {} outside [0, {rr}]", point.r)));
    }
    let modes = |count: usize| -> Result<Vec<BallRadialMode>> { (1..=count).map(|k| ball_radial_mode(spec, k)).collect() };
    match problem {
        BallProblem::Cooling(t0) => {
            let ms = modes(n)?;
            let terms = par::map_slice(Exec::default(), &ms, |m| {
                let breaks = uniform_breaks(0.0, rr, m.k + 1);
                let c = gauss_kronrod_points(|x| 4.0 * PI * x * x * t0(x) * m.eval(x), &breaks, 1e-14, 1e-12).value;
                c * (-m.lambda * spec.a2 * t).exp() * m.eval(point.r)
            });
            let mut value = par::pairwise_sum(&terms);
            if spec.bc == BallBc::Neumann {
                let breaks = uniform_breaks(0.0, rr, 8);
                let mean = 3.0 / rr.powi(3) * gauss_kronrod_points(|x| x * x * t0(x), &breaks, 1e-14, 1e-12).value;
                value += mean;
            }
            Ok(value)
        }
        BallProblem::Sources { q, kappa } => {
            positive("conductivity", kappa)?;
            if spec.bc == BallBc::Neumann {
                return Err(Error::Unsupported("uniform sources in an insulated ball have no steady state".into()));
            }
            let ms = modes(n)?;
            let terms = par::map_slice(Exec::Sequential, &ms, |m| {
                let steady = q / kappa * m.volume_integral() / m.lambda;
                steady * (1.0 - (-m.lambda * spec.a2 * t).exp()) * m.eval(point.r)
            });
            Ok(par::pairwise_sum(&terms))
        }
        BallProblem::AxisymCooling(t0) => {
            if spec.bc != BallBc::Dirichlet {
                return Err(Error::Unsupported("axisymmetric ball cooling needs a zero surface temperature".into()));
            }
            let gl = GaussLegendre::new(24);
            let cos_t = point.theta.cos();
            let pairs: Vec<(u32, usize)> = (0..n as u32).flat_map(|l| (1..=n).map(move |k| (l, k))).collect();
            let terms = par::map_slice(Exec::default(), &pairs, |&(l, k)| -> Result<f64> {
                let alpha = zero_table(ZeroFamily::SphericalJ, l, k)?.roots[k - 1];
                let scale = (2 * l + 1) as f64 / (rr.powi(3) * spherical_j(l + 1, alpha).powi(2));
                let radial = |x: f64| {
                    let ang = gl.composite(
                        |th| th.sin() * t0(x, th) * legendre_p(l, th.cos()).unwrap_or(0.0),
                        0.0,
                        PI,
                        l as usize + 2,
                    );
                    x * x * ang * spherical_j(l, alpha * x / rr)
                };
                let a = scale * gl.composite(radial, 0.0, rr, k + 2);
                let lam = (alpha / rr).powi(2);
                Ok(a * (-lam * spec.a2 * t).exp() * spherical_j(l, alpha * point.r / rr) * legendre_p(l, cos_t)?)
            });
            let terms: Vec<f64> = terms.into_iter().collect::<Result<_>>()?;
            Ok(par::pairwise_sum(&terms))
        }
        BallProblem::LaplaceDirichlet(bdry) => {
            if spec.bc != BallBc::Dirichlet {
                return Err(Error::Unsupported("the Laplace problem is posed with surface values".into()));
            }
            let series = expand_series(SeriesKind::Legendre, &|x: f64| bdry(x.clamp(-1.0, 1.0).acos()), n)?;
            let x = point.theta.cos();
            let rho = point.r / rr;
            let mut s = 0.0;
            for (l, c) in series.coefficients.iter().enumerate() {
                s += c * rho.powi(l as i32) * legendre_p(l as u32, x)?;
            }
            Ok(s)
        }
    }
}

/// Steady temperature from uniform sources q: qR²/(6κ)(1 − r²/R²), plus qR/(3κh) for Newton cooling.
pub fn ball_steady_source(spec: &BallSpec, q: f64, kappa: f64, r: f64) -> Result<f64> {
    positive("conductivity", kappa)?;
    let rr = spec.radius;
    let base = q * rr * rr / (6.0 * kappa) * (1.0 - (r / rr).powi(2));
    match spec.bc {
        BallBc::Dirichlet => Ok(base),
        BallBc::Robin(h) => Ok(base + q * rr / (3.0 * kappa * h)),
        BallBc::Neumann => Err(Error::Unsupported("uniform sources in an insulated ball have no steady state".into())),
    }
}

/// Orthogonal series kinds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeriesKind {
    /// Σ c_k J_m(α_k^{(m)} r/R) on [0, R], k ≥ 1.
    FourierBessel { m: u32, radius: f64 },
    /// Σ c_n P_n(x) on [−1, 1], n ≥ 0.
    Legendre,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesExpansion {
    pub kind: SeriesKind,
    pub coefficients: Vec<f64>,
    roots: Vec<f64>,
}

impl SeriesExpansion {
    pub fn eval(&self, x: f64) -> f64 {
        match self.kind {
            SeriesKind::FourierBessel { m, radius } => {
                let terms: Vec<f64> = self
                    .coefficients
                    .iter()
                    .zip(&self.roots)
                    .map(|(c, a)| c * bessel_j(m, a * x / radius))
                    .collect();
                par::pairwise_sum(&terms)
            }
            SeriesKind::Legendre => {
                let x = x.clamp(-1.0, 1.0);
                // forward recurrence alongside the partial sum
                let (mut p0, mut p1) = (1.0, x);
                let mut s = 0.0;
                for (n, c) in self.coefficients.iter().enumerate() {
                    let pn = match n {
                        0 => p0,
                        1 => p1,
                        _ => {
                            let nf = n as f64;
                            let p2 = ((2.0 * nf - 1.0) * x * p1 - (nf - 1.0) * p0) / nf;
                            p0 = p1;
                            p1 = p2;
                            p2
                        }
                    };
                    s += c * pn;
                }
                s
            }
        }
    }

    /// ∫(f − S_N)² with the weight of the expansion (r for Fourier–Bessel).
    pub fn l2_error(&self, f: &(dyn Fn(f64) -> f64 + Sync)) -> f64 {
        let n = self.coefficients.len();
        match self.kind {
            SeriesKind::FourierBessel { radius, .. } => {
                let breaks = uniform_breaks(0.0, radius, 2 * n + 2);
                gauss_kronrod_points(|x| x * (f(x) - self.eval(x)).powi(2), &breaks, 1e-15, 1e-10).value
            }
            SeriesKind::Legendre => {
                let breaks = uniform_breaks(-1.0, 1.0, 2 * (n + 2));
                gauss_kronrod_points(|x| (f(x) - self.eval(x)).powi(2), &breaks, 1e-15, 1e-10).value
            }
        }
    }
}

/// First `n` coefficients by quadrature.
pub fn expand_series(kind: SeriesKind, f: &(dyn Fn(f64) -> f64 + Sync), n: usize) -> Result<SeriesExpansion> {
    if n == 0 {
        return Err(domain("expand_series", "at least one coefficient is needed"));
    }
    match kind {
        SeriesKind::FourierBessel { m, radius } => {
            positive("radius", radius)?;
            let roots = zero_table(ZeroFamily::BesselJ, m, n)?.roots[..n].to_vec();
            let coefficients = par::map_indexed(Exec::default(), n, |i| {
                let a = roots[i];
                2.0 / (radius * radius * bessel_j_prime(m, a).powi(2)) * hankel_moment(f, m, a, radius, i + 1)
            });
            Ok(SeriesExpansion { kind, coefficients, roots })
        }
        SeriesKind::Legendre => {
            let coefficients = par::map_indexed(Exec::default(), n, |i| {
                let breaks = uniform_breaks(-1.0, 1.0, 2 * (i / 2 + 2));
                let g = |x: f64| f(x) * legendre_p(i as u32, x).unwrap_or(0.0);
                (2 * i + 1) as f64 / 2.0 * gauss_kronrod_points(g, &breaks, 1e-15, 1e-12).value
            });
            Ok(SeriesExpansion {
                kind,
                coefficients,
                roots: Vec::new(),
            })
        }
    }
}

/// Y_n^m(θ, φ) normalized on the unit sphere; Y_n^{−m} is the conjugate of Y_n^m.
pub fn spherical_harmonic(n: u32, m: i32, theta: f64, phi: f64) -> Result<Complex64> {
    let am = m.unsigned_abs();
    if am > n {
        return Err(domain("spherical_harmonic", format!("|m| = {am} exceeds n = {n}")));
    }
    let norm = (1.0 / (2.0 * PI) / assoc_legendre_norm_sq(n, am)).sqrt();
    let p = assoc_legendre(n, am, theta.cos())?;
    Ok(Complex64::from_polar(norm * p, m as f64 * phi))
}

/// ∫ over the sphere of conj(Y_n^m) Y_n'^m' by product Gauss–Legendre quadrature.
pub fn spherical_overlap(n: u32, m: i32, n2: u32, m2: i32) -> Result<Complex64> {
    let gl = GaussLegendre::new(32);
    let mut acc = Complex64::new(0.0, 0.0);
    for (th, wt) in gl.mapped(0.0, PI) {
        for (ph, wp) in gl.mapped(0.0, 2.0 * PI) {
            let a = spherical_harmonic(n, m, th, ph)?;
            let b = spherical_harmonic(n2, m2, th, ph)?;
            acc += a.conj() * b * th.sin() * wt * wp;
        }
    }
    Ok(acc)
}

/// Volume integral of f over the ball using r²sinθ dr dθ dφ and Gauss–Legendre in each factor.
pub fn ball_integral(radius: f64, f: &(dyn Fn(f64, f64, f64) -> f64 + Sync), panels: usize) -> f64 {
    let gl = GaussLegendre::new(16);
    let inner_theta = |r: f64| {
        gl.composite(
            |th| th.sin() * gl.composite(|ph| f(r, th, ph), 0.0, 2.0 * PI, panels),
            0.0,
            PI,
            panels,
        )
    };
    gauss_kronrod(|r| r * r * inner_theta(r), 0.0, radius, 1e-13, 1e-10).value
}
