//! Classic variational problems: the transcendental shape equations of the
//! catenoid, the hanging chain and the isoperimetric arc, brachistochrone
//! fitting, geodesics on simple surfaces and an Euler–Lagrange residual.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::quad::gauss_kronrod;
use crate::roots::{bisect_secant, RootTol};

const TOL: RootTol = RootTol {
    f_abs: 0.0,
    x_abs: 1e-15,
    max_iter: 400,
};

/// ch u = αu, sh u = αu or arcsin u = αu.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransKind {
    Cosh,
    Sinh,
    Arcsin,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TranscendentalFamily {
    pub kind: TransKind,
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootClass {
    /// ch u = αu with α < α*: no smooth catenoid.
    NoSmoothCatenoid,
    /// α = α*: the line touches ch u.
    Tangent,
    /// α > α*: two catenoids, one physical.
    TwoCatenoids,
    /// Only u = 0 solves the equation.
    TrivialOnly,
    /// One positive root besides u = 0.
    OneNontrivial,
    /// arcsin u = αu with α > π/2: no single-valued arc.
    NoSingleValuedArc,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransRoot {
    pub u: f64,
    pub tangent: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub family: TranscendentalFamily,
    /// Positive roots in ascending order; u = 0 is reported through `trivial`.
    pub roots: Vec<TransRoot>,
    pub trivial: bool,
    pub class: RootClass,
    /// α* = sh u* with ch u* = u* sh u*, reported for the cosh family.
    pub alpha_star: Option<f64>,
    /// Index into `roots` of the catenoid with the lower surface energy.
    pub physical: Option<usize>,
    /// Surface energy ΔF/(4πσ) of each root for rings of unit half-separation.
    pub energies: Vec<f64>,
}

/// u* with ch u* = u* sh u*, and α* = sh u*.
pub fn catenoid_threshold() -> Result<(f64, f64)> {
    let u = bisect_secant(|u: f64| u.cosh() - u * u.sinh(), 0.5, 2.0, TOL)?;
    Ok((u, u.sinh()))
}

/// sh(u)/u without cancellation near 0.
fn sinhc(u: f64) -> f64 {
    if u.abs() < 1e-3 {
        let u2 = u * u;
        1.0 + u2 / 6.0 * (1.0 + u2 / 20.0 * (1.0 + u2 / 42.0))
    } else {
        u.sinh() / u
    }
}

/// arcsin(u)/u without cancellation near 0.
fn asinc(u: f64) -> f64 {
    if u.abs() < 1e-3 {
        let u2 = u * u;
        1.0 + u2 / 6.0 + 3.0 * u2 * u2 / 40.0
    } else {
        u.asin() / u
    }
}

/// Surface energy ∫_{−1}^{1} y√(1+y′²) dx of y = C ch(x/C), C = 1/u, by quadrature.
pub fn catenoid_energy(u: f64) -> f64 {
    let c = 1.0 / u;
    gauss_kronrod(|x| c * (x / c).cosh().powi(2), -1.0, 1.0, 1e-14, 1e-13).value
}

/// Grow `hi` until f(hi) > 0.
fn expand_up(f: impl Fn(f64) -> f64, mut hi: f64) -> Result<f64> {
    for _ in 0..200 {
        if f(hi) > 0.0 {
            return Ok(hi);
        }
        hi *= 2.0;
    }
    Err(Error::Bracket { index: 1, lo: 0.0, hi })
}

pub fn solve_transcendental(fam: TranscendentalFamily) -> Result<RootSet> {
    let alpha = fam.alpha;
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(domain("solve_transcendental", format!("alpha must be positive, got {alpha}")));
    }
    let mut set = RootSet {
        family: fam,
        roots: Vec::new(),
        trivial: false,
        class: RootClass::TrivialOnly,
        alpha_star: None,
        physical: None,
        energies: Vec::new(),
    };
    match fam.kind {
        TransKind::Cosh => {
            let (_, astar) = catenoid_threshold()?;
            set.alpha_star = Some(astar);
            let f = |u: f64| u.cosh() - alpha * u;
            // f is convex with its minimum where sh u = α
            let um = alpha.asinh();
            let fm = f(um);
            if fm.abs() < 1e-8 * alpha.max(1.0) {
                set.class = RootClass::Tangent;
                set.roots.push(TransRoot { u: um, tangent: true });
            } else if fm > 0.0 {
                set.class = RootClass::NoSmoothCatenoid;
            } else {
                set.class = RootClass::TwoCatenoids;
                let u1 = bisect_secant(f, 0.0, um, TOL)?;
                let hi = expand_up(f, 2.0 * um.max(1.0))?;
                let u2 = bisect_secant(f, um, hi, TOL)?;
                set.roots.push(TransRoot { u: u1, tangent: false });
                set.roots.push(TransRoot { u: u2, tangent: false });
            }
            set.energies = set.roots.iter().map(|r| catenoid_energy(r.u)).collect();
            if !set.roots.is_empty() {
                // lower energy wins; ties go to the larger u (thinner neck)
                let mut best = 0;
                for (i, e) in set.energies.iter().enumerate() {
                    let eb = set.energies[best];
                    if *e < eb - 1e-14 * eb.abs() || (*e - eb).abs() <= 1e-14 * eb.abs() && set.roots[i].u > set.roots[best].u {
                        best = i;
                    }
                }
                set.physical = Some(best);
            }
        }
        TransKind::Sinh => {
            set.trivial = true;
            if alpha <= 1.0 {
                set.class = RootClass::TrivialOnly;
            } else {
                set.class = RootClass::OneNontrivial;
                let g = |u: f64| sinhc(u) - alpha;
                let um = alpha.acosh();
                let hi = expand_up(g, um.max(1e-300) * 2.0 + 1e-300)?;
                let u = bisect_secant(g, 0.0, hi, TOL)?;
                set.roots.push(TransRoot { u, tangent: false });
            }
        }
        TransKind::Arcsin => {
            set.trivial = true;
            if alpha <= 1.0 {
                set.class = RootClass::TrivialOnly;
            } else if alpha > PI / 2.0 {
                set.class = RootClass::NoSingleValuedArc;
            } else {
                set.class = RootClass::OneNontrivial;
                let g = |u: f64| asinc(u) - alpha;
                let u = if (alpha - PI / 2.0).abs() < 1e-15 { 1.0 } else { bisect_secant(g, 0.0, 1.0, TOL)? };
                set.roots.push(TransRoot { u, tangent: false });
            }
        }
    }
    Ok(set)
}

/// Brachistochrone from the origin to (l, h), y pointing down.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycloidFit {
    pub phi2: f64,
    pub c1: f64,
    pub l: f64,
    pub h: f64,
    /// Descent time φ₂/(2ω₀), ω₀ = √(g/(4C₁)).
    pub time: f64,
}

impl CycloidFit {
    pub fn x(&self, phi: f64) -> f64 {
        self.c1 * (phi - phi.sin())
    }

    pub fn y(&self, phi: f64) -> f64 {
        self.c1 * (1.0 - phi.cos())
    }

    /// Curve parameter at abscissa x ∈ [0, x(φ₂)].
    pub fn phi_at(&self, x: f64) -> Result<f64> {
        if x <= 0.0 {
            return Ok(0.0);
        }
        bisect_secant(|p| self.x(p) - x, 0.0, 2.0 * PI, TOL)
    }

    /// y as a function of x.
    pub fn y_of_x(&self, x: f64) -> Result<f64> {
        Ok(self.y(self.phi_at(x)?))
    }
}

/// (1 − cos φ)/(φ − sin φ) with series for small φ.
fn cycloid_ratio(phi: f64) -> f64 {
    let num = 2.0 * (phi / 2.0).sin().powi(2);
    let den = if phi < 1e-2 {
        let p2 = phi * phi;
        phi * p2 / 6.0 * (1.0 - p2 / 20.0 * (1.0 - p2 / 42.0))
    } else {
        phi - phi.sin()
    };
    num / den
}

pub fn brachistochrone_fit(l: f64, h: f64, g: f64) -> Result<CycloidFit> {
    for (what, v) in [("l", l), ("h", h), ("g", g)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(domain("brachistochrone_fit", format!("{what} must be positive, got {v}")));
        }
    }
    let r = h / l;
    // the ratio falls monotonically from +∞ at 0 to 0 at 2π
    let f = |p: f64| cycloid_ratio(p) - r;
    let mut lo = PI;
    while f(lo) <= 0.0 {
        lo *= 0.5;
        if lo < 1e-300 {
            return Err(domain("brachistochrone_fit", format!("h/l = {r} is out of range")));
        }
    }
    let phi2 = if f(lo) == 0.0 { lo } else { bisect_secant(f, lo, 2.0 * PI, TOL)? };
    if !(phi2 > 0.0 && phi2 < 2.0 * PI) {
        return Err(domain("brachistochrone_fit", format!("h/l = {r} is out of range")));
    }
    let c1 = h / (1.0 - phi2.cos());
    let omega0 = (g / (4.0 * c1)).sqrt();
    Ok(CycloidFit {
        phi2,
        c1,
        l,
        h,
        time: phi2 / (2.0 * omega0),
    })
}

/// Fastest descent to the vertical line x = l: C₁ = l/π, φ ∈ [0, π].
pub fn brachistochrone_to_line(l: f64, g: f64) -> Result<CycloidFit> {
    brachistochrone_fit(l, 2.0 * l / PI, g)
}

/// Surfaces with closed-form geodesics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Surface {
    /// Sphere of radius R; points are (θ, φ).
    Sphere(f64),
    /// Cylinder of radius R; points are (φ, z).
    Cylinder(f64),
    /// Cone x = az cos φ, y = az sin φ; points are (φ, z), z ≥ 0.
    Cone(f64),
}

/// Special cases of the geodesic families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeodesicShape {
    /// C₁* = 0 on the sphere.
    Meridian,
    GreatCircle,
    /// Equal angles on the cylinder.
    VerticalSegment,
    /// Equal heights on the cylinder.
    CircleArc,
    Helix,
    /// Equal angles on the cone (C₁ = 0).
    Generator,
    ConeArc,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geodesic {
    pub surface: Surface,
    pub shape: GeodesicShape,
    pub length: f64,
    /// Sphere: plane z = Ax + By when it exists. Cone: C₁ and C₂. Cylinder: dφ/dτ, dz/dτ.
    pub constants: (f64, f64),
    p1: [f64; 3],
    p2: [f64; 3],
    start: (f64, f64),
    delta: (f64, f64),
}

fn wrap_angle(d: f64) -> f64 {
    let mut d = d.rem_euclid(2.0 * PI);
    if d > PI {
        d -= 2.0 * PI;
    }
    d
}

impl Geodesic {
    /// Cartesian point at τ ∈ [0, 1].
    pub fn point(&self, tau: f64) -> [f64; 3] {
        match self.surface {
            Surface::Sphere(r) => {
                let (a, b) = (self.p1, self.p2);
                let dot = (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]).clamp(-1.0, 1.0);
                let om = dot.acos();
                if om < 1e-15 {
                    return [r * a[0], r * a[1], r * a[2]];
                }
                let (s0, s1) = (((1.0 - tau) * om).sin() / om.sin(), (tau * om).sin() / om.sin());
                [r * (s0 * a[0] + s1 * b[0]), r * (s0 * a[1] + s1 * b[1]), r * (s0 * a[2] + s1 * b[2])]
            }
            Surface::Cylinder(r) => {
                let phi = self.start.0 + tau * self.delta.0;
                [r * phi.cos(), r * phi.sin(), self.start.1 + tau * self.delta.1]
            }
            Surface::Cone(a) => {
                let (phi, z) = self.surface_coords(tau);
                [a * z * phi.cos(), a * z * phi.sin(), z]
            }
        }
    }

    /// Surface coordinates at τ: (θ, φ) on the sphere, (φ, z) otherwise.
    pub fn surface_coords(&self, tau: f64) -> (f64, f64) {
        match self.surface {
            Surface::Sphere(r) => {
                let p = self.point(tau);
                ((p[2] / r).clamp(-1.0, 1.0).acos(), p[1].atan2(p[0]))
            }
            Surface::Cylinder(_) => (self.start.0 + tau * self.delta.0, self.start.1 + tau * self.delta.1),
            Surface::Cone(a) => {
                // straight segment in the developed plane
                let k = (1.0 + a * a).sqrt();
                let (x1, y1) = (self.p1[0], self.p1[1]);
                let (x2, y2) = (self.p2[0], self.p2[1]);
                let (x, y) = (x1 + tau * (x2 - x1), y1 + tau * (y2 - y1));
                let s = x.hypot(y);
                let psi = y.atan2(x);
                (self.start.0 + psi * k / a, s / k)
            }
        }
    }
}

/// Closed-form geodesic between two points of a surface.
pub fn geodesic(surface: Surface, p1: (f64, f64), p2: (f64, f64)) -> Result<Geodesic> {
    if p1 == p2 {
        return Err(domain("geodesic", "endpoints must be distinct"));
    }
    match surface {
        Surface::Sphere(r) => {
            if !(r > 0.0) {
                return Err(domain("geodesic", "radius must be positive"));
            }
            let unit = |(th, ph): (f64, f64)| [th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()];
            let (a, b) = (unit(p1), unit(p2));
            let n = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
            let nn = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
            let dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
            if nn < 1e-12 {
                if dot < 0.0 {
                    return Err(Error::InvalidProblem("antipodal points: every meridian through them is a geodesic".into()));
                }
                return Err(domain("geodesic", "endpoints must be distinct"));
            }
            let angle = nn.atan2(dot);
            // plane through the centre; z = Ax + By unless it contains the axis
            let (shape, constants) = if n[2].abs() <= 1e-12 * nn {
                (GeodesicShape::Meridian, (0.0, 0.0))
            } else {
                (GeodesicShape::GreatCircle, (-n[0] / n[2], -n[1] / n[2]))
            };
            Ok(Geodesic {
                surface,
                shape,
                length: r * angle,
                constants,
                p1: a,
                p2: b,
                start: p1,
                delta: (0.0, 0.0),
            })
        }
        Surface::Cylinder(r) => {
            if !(r > 0.0) {
                return Err(domain("geodesic", "radius must be positive"));
            }
            let dphi = wrap_angle(p2.0 - p1.0);
            let dz = p2.1 - p1.1;
            let shape = if dphi == 0.0 {
                GeodesicShape::VerticalSegment
            } else if dz == 0.0 {
                GeodesicShape::CircleArc
            } else {
                GeodesicShape::Helix
            };
            Ok(Geodesic {
                surface,
                shape,
                length: (r * dphi).hypot(dz),
                constants: (dphi, dz),
                p1: [0.0; 3],
                p2: [0.0; 3],
                start: p1,
                delta: (dphi, dz),
            })
        }
        Surface::Cone(a) => {
            if !(a > 0.0) {
                return Err(domain("geodesic", "cone slope must be positive"));
            }
            if p1.1 < 0.0 || p2.1 < 0.0 {
                return Err(domain("geodesic", "cone points need z >= 0"));
            }
            let k = (1.0 + a * a).sqrt();
            let dphi = wrap_angle(p2.0 - p1.0);
            // develop the cone: slant s = kz, angle ψ = aφ/k measured from the first point
            let (s1, s2) = (k * p1.1, k * p2.1);
            let dpsi = a * dphi / k;
            let q1 = [s1, 0.0, 0.0];
            let q2 = [s2 * dpsi.cos(), s2 * dpsi.sin(), 0.0];
            let length = (q2[0] - q1[0]).hypot(q2[1] - q1[1]);
            let (shape, constants) = if dphi == 0.0 {
                (GeodesicShape::Generator, (0.0, p1.0))
            } else {
                // s cos(ψ − β) = p on the developed line, β the direction of its foot
                let d = [q2[0] - q1[0], q2[1] - q1[1]];
                let t = -(q1[0] * d[0] + q1[1] * d[1]) / (length * length);
                let foot = [q1[0] + t * d[0], q1[1] + t * d[1]];
                let p = foot[0].hypot(foot[1]);
                let beta = foot[1].atan2(foot[0]);
                let c2 = p1.0 + (beta - PI / 2.0) * k / a;
                (GeodesicShape::ConeArc, (p * a / k, c2))
            };
            Ok(Geodesic {
                surface,
                shape,
                length,
                constants,
                p1: q1,
                p2: q2,
                start: p1,
                delta: (dphi, p2.1 - p1.1),
            })
        }
    }
}

/// Largest |F_y − d/dx F_{y′}| over the grid for the candidate y(x).
/// Derivatives use five-point central differences with step ε^{1/5}·scale,
/// where scale is the grid span.
pub fn el_residual(
    f: &dyn Fn(f64, f64, f64) -> f64,
    y: &dyn Fn(f64) -> f64,
    grid: &[f64],
) -> Result<f64> {
    if grid.is_empty() {
        return Err(domain("el_residual", "grid is empty"));
    }
    let (lo, hi) = grid.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let scale = (hi - lo).max(1.0);
    let h = f64::EPSILON.powf(0.2) * scale;
    let d5 = |g: &dyn Fn(f64) -> f64, x: f64, h: f64| (g(x - 2.0 * h) - 8.0 * g(x - h) + 8.0 * g(x + h) - g(x + 2.0 * h)) / (12.0 * h);
    let dy = |x: f64| d5(y, x, h);
    let f_p = |x: f64| {
        let (yv, pv) = (y(x), dy(x));
        let hp = h * pv.abs().max(1.0);
        d5(&|p| f(x, yv, p), pv, hp)
    };
    let mut worst = 0.0f64;
    for &x in grid {
        let (yv, pv) = (y(x), dy(x));
        let hy = h * yv.abs().max(1.0);
        let fy = d5(&|v| f(x, v, pv), yv, hy);
        let dfp = d5(&f_p, x, h);
        let r = (fy - dfp).abs();
        if !r.is_finite() {
            return Err(domain("el_residual", format!("non-finite residual at x = {x}")));
        }
        worst = worst.max(r);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_star() {
        let (u, a) = catenoid_threshold().unwrap();
        assert!((u.cosh() - u * u.sinh()).abs() < 1e-14);
        assert!((a - 1.509).abs() < 1e-3);
    }

    #[test]
    fn ratio_series_matches_direct() {
        for &p in &[0.0099, 0.0101, 0.5, 3.0] {
            let direct = (1.0 - f64::cos(p)) / (p - p.sin());
            assert!((cycloid_ratio(p) - direct).abs() < 1e-9 * direct);
        }
    }
}
