use std::f64::consts::PI;

use proptest::prelude::*;
use sepvar::geomnd::*;
use sepvar::quad::GaussLegendre;
use sepvar::specfun::{bessel_j, bessel_zero, legendre_p, spherical_j, ZeroFamily};

#[test]
fn square_membrane_degeneracy_and_values() {
    let sq = RectMembrane::fixed(PI, PI, 1.0, 1.0).unwrap();
    assert!((sq.eigenvalue(1, 1) - 2.0).abs() < 1e-14);
    assert_eq!(sq.eigenvalue(1, 2), sq.eigenvalue(2, 1));
    assert_eq!(sq.degenerate_partners(1, 2, 10), vec![(2, 1)]);
    // 5² + 5² = 1² + 7² = 7² + 1²
    let p = sq.degenerate_partners(5, 5, 10);
    assert_eq!(p, vec![(1, 7), (7, 1)]);
    let rect = RectMembrane::fixed(1.0, 2.0f64.sqrt(), 1.0, 1.0).unwrap();
    assert!(rect.degenerate_partners(1, 1, 12).is_empty());
    // l₂ = 2l₁: λ ∝ 4m² + n², so (1, 4) and (2, 2) coincide
    let r2 = RectMembrane::fixed(1.0, 2.0, 1.0, 1.0).unwrap();
    assert!(r2.degenerate_partners(1, 4, 6).contains(&(2, 2)));
}

#[test]
fn rect_modes_are_orthonormal() {
    let gl = GaussLegendre::new(40);
    for edges in [
        [Edge::Fixed; 4],
        [Edge::Fixed, Edge::Free, Edge::Free, Edge::Free],
        [Edge::Free, Edge::Fixed, Edge::Fixed, Edge::Free],
    ] {
        let mem = RectMembrane::new(1.3, 0.7, edges, 1.0, 1.0).unwrap();
        let modes: Vec<RectMode> = (1..=3).flat_map(|m| (1..=3).map(move |n| (m, n))).map(|(m, n)| mem.mode(m, n).unwrap()).collect();
        for a in &modes {
            for b in &modes {
                let v = gl.composite(|x| gl.composite(|y| a.eval(x, y) * b.eval(x, y), 0.0, 0.7, 2), 0.0, 1.3, 2);
                let want = if (a.m, a.n) == (b.m, b.n) { 1.0 } else { 0.0 };
                assert!((v - want).abs() < 1e-9, "{edges:?} {}{} {}{}", a.m, a.n, b.m, b.n);
            }
        }
    }
}

fn observed_order(res: impl Fn(f64) -> f64, h: f64) -> f64 {
    (res(h) / res(h / 2.0)).log2()
}

#[test]
fn helmholtz_residual_rect_and_disk() {
    let mem = RectMembrane::new(1.0, 1.5, [Edge::Fixed, Edge::Free, Edge::Fixed, Edge::Fixed], 1.0, 1.0).unwrap();
    let md = mem.mode(2, 3).unwrap();
    let (x, y) = (0.37, 0.61);
    let res = |h: f64| {
        let lap = (md.eval(x + h, y) + md.eval(x - h, y) + md.eval(x, y + h) + md.eval(x, y - h) - 4.0 * md.eval(x, y)) / (h * h);
        (lap + md.lambda * md.eval(x, y)).abs()
    };
    assert!(observed_order(res, 0.02) >= 1.8);

    let disk = DiskMembrane::new(1.2, 1.0, 1.0).unwrap();
    let dm = disk_membrane_mode(&disk, 2, 2, Parity::Sin).unwrap();
    let (r, p) = (0.5, 0.4);
    let res = |h: f64| {
        let f = |r: f64, p: f64| dm.eval(r, p);
        let urr = (f(r + h, p) - 2.0 * f(r, p) + f(r - h, p)) / (h * h);
        let ur = (f(r + h, p) - f(r - h, p)) / (2.0 * h);
        let upp = (f(r, p + h) - 2.0 * f(r, p) + f(r, p - h)) / (h * h);
        (urr + ur / r + upp / (r * r) + dm.lambda * f(r, p)).abs()
    };
    assert!(observed_order(res, 0.02) >= 1.8);
}

fn disk_overlap(a: &DiskMode, b: &DiskMode, radius: f64) -> f64 {
    let gl = GaussLegendre::new(32);
    gl.composite(|r| r * gl.composite(|p| a.eval(r, p) * b.eval(r, p), 0.0, 2.0 * PI, 4), 0.0, radius, 4)
}

#[test]
fn disk_modes() {
    let disk = DiskMembrane::new(0.8, 3.0, 1.0).unwrap();
    let m01 = disk_membrane_mode(&disk, 0, 1, Parity::Cos).unwrap();
    assert!((m01.omega - 2.405 * 3.0 / 0.8).abs() < 1e-3 * 3.0 / 0.8);
    assert!(m01.eval(0.8, 0.3).abs() < 1e-12);
    let mut modes = Vec::new();
    for m in 0..=2 {
        for k in 1..=2 {
            modes.push(disk_membrane_mode(&disk, m, k, Parity::Cos).unwrap());
            if m > 0 {
                modes.push(disk_membrane_mode(&disk, m, k, Parity::Sin).unwrap());
            }
        }
    }
    for a in &modes {
        for b in &modes {
            let v = disk_overlap(a, b, 0.8);
            if a == b {
                assert!((v - 1.0).abs() < 1e-7);
            } else {
                assert!(v.abs() < 1e-9);
            }
        }
    }
    assert!(disk_membrane_mode(&disk, 0, 1, Parity::Sin).is_err());
}

#[test]
fn disk_axisymmetric_single_mode_and_impulse() {
    let disk = DiskMembrane::new(1.5, 2.0, 0.7).unwrap();
    let a1 = bessel_zero(ZeroFamily::BesselJ, 0, 1).unwrap();
    let u0 = move |r: f64| bessel_j(0, a1 * r / 1.5);
    let zero = |_: f64| 0.0;
    let sol = DiskAxisym::new(disk, &u0, &zero, 8).unwrap();
    assert!((sol.cos_coef[0] - 1.0).abs() < 1e-10);
    for c in &sol.cos_coef[1..] {
        assert!(c.abs() < 1e-10);
    }
    let w = 2.0 * a1 / 1.5;
    assert!((sol.value(0.4, 0.9) - (w * 0.9).cos() * u0(0.4)).abs() < 1e-10);

    // uniform impulse P over r ≤ δ
    let (p, delta) = (0.3, 0.25);
    let v0 = move |r: f64| if r <= delta { p / (0.7 * PI * delta * delta) } else { 0.0 };
    let imp = DiskAxisym::new(disk, &zero, &v0, 6).unwrap();
    for (k, b) in imp.sin_coef.iter().enumerate() {
        let al = imp.alphas[k];
        let want = 2.0 * p / (PI * 2.0 * delta * 0.7) * bessel_j(1, al * delta / 1.5) / (al * al * bessel_j(1, al).powi(2));
        assert!((b - want).abs() < 1e-6 * want.abs().max(1e-3), "{k}: {b} {want}");
    }
}

#[test]
fn disk_uniform_pressure() {
    let disk = DiskMembrane::new(1.0, 1.0, 1.3).unwrap();
    let (p0, w) = (0.8, 1.7);
    let n = 12;
    let pressure = move |_: f64, t: f64| p0 * (w * t).sin();
    let alphas: Vec<f64> = (1..=n).map(|k| bessel_zero(ZeroFamily::BesselJ, 0, k).unwrap()).collect();
    for &(r, t) in &[(0.2, 0.7), (0.6, 2.3)] {
        let got = disk_forced_axisym(disk, &pressure, n, r, t).unwrap();
        let steady = disk_pressure_amplitude(disk, p0, w, r).unwrap() * (w * t).sin();
        let transient: f64 = alphas
            .iter()
            .map(|&al| {
                2.0 * p0 * w / 1.3 / (al * al * bessel_j(1, al) * (w * w - al * al)) * bessel_j(0, al * r) * (al * t).sin()
            })
            .sum();
        // the steady part is exact; the transient series has decaying tail ~α⁻⁴
        assert!((got - steady - transient).abs() < 2e-4, "{got} {} ", steady + transient);
    }
    // the steady amplitude solves −ω²A = a²ΔA + P₀/ρ with A(R) = 0
    let a = |r: f64| disk_pressure_amplitude(disk, p0, w, r).unwrap();
    assert!(a(1.0).abs() < 1e-14);
    let (r, h) = (0.45, 1e-4);
    let lap = (a(r + h) - 2.0 * a(r) + a(r - h)) / (h * h) + (a(r + h) - a(r - h)) / (2.0 * h * r);
    assert!((-w * w * a(r) - lap - p0 / 1.3).abs() < 1e-5);
    let al = alphas[0];
    assert!(matches!(disk_pressure_amplitude(disk, p0, al, 0.3), Err(sepvar::error::Error::Resonance { .. })));
}

#[test]
fn cylinder_routes_agree() {
    let finite = CylinderSpec { radius: 1.0, height: Some(2.0), a2: 0.5 };
    let t0 = 3.0;
    let radial = move |_: f64| t0;
    let full = move |_: f64, _: f64| t0;
    let (r, z, t) = (0.3, 0.4, 0.05);
    let u = cylinder_cooling(finite, CylinderInit::Uniform(t0), 30, 30, r, z, t).unwrap();
    let v = cylinder_cooling(finite, CylinderInit::Radial(&radial), 30, 30, r, z, t).unwrap();
    let w = cylinder_cooling(finite, CylinderInit::Full(&full), 12, 12, r, z, t).unwrap();
    let u12 = cylinder_cooling(finite, CylinderInit::Uniform(t0), 12, 12, r, z, t).unwrap();
    assert!((u.value - v.value).abs() < 1e-9);
    assert!((w.value - u12.value).abs() < 1e-8);
    assert!(u.guaranteed);
    // long rods approach the infinite-rod series
    let long = CylinderSpec { height: Some(400.0), ..finite };
    let inf = CylinderSpec { height: None, ..finite };
    let a = cylinder_cooling(long, CylinderInit::Uniform(t0), 40, 4000, r, 0.0, 0.3).unwrap();
    let b = cylinder_cooling(inf, CylinderInit::Uniform(t0), 40, 1, r, 0.0, 0.3).unwrap();
    assert!((a.value - b.value).abs() < 1e-3 * t0);
    let a1 = bessel_zero(ZeroFamily::BesselJ, 0, 1).unwrap();
    let late = cylinder_cooling(inf, CylinderInit::Uniform(t0), 20, 1, 0.0, 0.0, 3.0).unwrap();
    let lead = 2.0 * t0 / (a1 * bessel_j(1, a1)) * (-a1 * a1 * 0.5 * 3.0f64).exp();
    assert!(((late.value - lead) / lead).abs() < 1e-6);
    assert!(!cylinder_cooling(finite, CylinderInit::Uniform(t0), 10, 10, r, z, 1e-6).unwrap().guaranteed);
    assert!(cylinder_cooling(inf, CylinderInit::Full(&full), 10, 10, r, z, 1.0).is_err());
}

#[test]
fn cylinder_initial_value() {
    let spec = CylinderSpec { radius: 1.0, height: Some(3.0), a2: 1.0 };
    let u = cylinder_cooling(spec, CylinderInit::Uniform(1.0), 60, 60, 0.35, 0.2, 0.0).unwrap();
    assert!((u.value - 1.0).abs() < 0.01);
}

#[test]
fn cylinder_asymmetric_data() {
    let spec = CylinderSpec { radius: 1.0, height: Some(2.0), a2: 1.0 };
    let a1 = bessel_zero(ZeroFamily::BesselJ, 0, 1).unwrap();
    // a single product mode with an odd axial factor
    let f = move |r: f64, z: f64| bessel_j(0, a1 * r) * (PI * z).sin();
    let t = 0.1;
    let u = cylinder_cooling(spec, CylinderInit::Full(&f), 3, 3, 0.4, 0.3, t).unwrap();
    let want = f(0.4, 0.3) * (-(a1 * a1 + PI * PI) * t).exp();
    assert!((u.value - want).abs() < 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cooling_stays_in_range(r in 0.0..1.0f64, zf in -1.0..1.0f64, tf in 0.05..2.0f64) {
        let spec = CylinderSpec { radius: 1.0, height: Some(2.5), a2: 0.8 };
        let t = tf / 0.8;
        let u = cylinder_cooling(spec, CylinderInit::Uniform(1.0), 40, 40, r, zf * 1.25, t).unwrap().value;
        prop_assert!((-1e-9..=1.0 + 1e-3).contains(&u));
        let ball = BallSpec::new(1.0, BallBc::Dirichlet, 0.8).unwrap();
        let one = |_: f64| 1.0;
        let v = ball_solution(&ball, BallProblem::Cooling(&one), 60, BallPoint { r, theta: 0.0 }, t).unwrap();
        prop_assert!((-1e-9..=1.0 + 1e-3).contains(&v));
    }
}

#[test]
fn ball_root_families() {
    let d = BallSpec::new(2.0, BallBc::Dirichlet, 1.0).unwrap();
    for k in 1..=5 {
        assert_eq!(ball_radial_mode(&d, k).unwrap().gamma, PI * k as f64);
    }
    let n = BallSpec::new(2.0, BallBc::Neumann, 1.0).unwrap();
    let mut prev = f64::INFINITY;
    for k in 1..=40 {
        let g = ball_radial_mode(&n, k).unwrap().gamma;
        assert!((g.tan() - g).abs() / (1.0 + g * g) < 1e-8);
        let gap = (PI / 2.0 + PI * k as f64) - g;
        assert!(gap > 0.0 && gap < prev);
        prev = gap;
    }
    assert!(prev < 0.01);
}

#[test]
fn ball_modes_are_orthonormal() {
    let gl = GaussLegendre::new(40);
    for bc in [BallBc::Dirichlet, BallBc::Neumann, BallBc::Robin(0.4), BallBc::Robin(3.0)] {
        let spec = BallSpec::new(1.7, bc, 1.0).unwrap();
        let ms: Vec<BallRadialMode> = (1..=5).map(|k| ball_radial_mode(&spec, k).unwrap()).collect();
        for a in &ms {
            for b in &ms {
                let v = gl.composite(|r| 4.0 * PI * r * r * a.eval(r) * b.eval(r), 0.0, 1.7, 6);
                let want = if a.k == b.k { 1.0 } else { 0.0 };
                assert!((v - want).abs() < 1e-7, "{bc:?} {} {}", a.k, b.k);
            }
        }
    }
}

#[test]
fn ball_uniform_cooling_closed_forms() {
    let (rr, a2, t0) = (1.3, 0.6, 2.0);
    let one = move |_: f64| t0;
    let d = BallSpec::new(rr, BallBc::Dirichlet, a2).unwrap();
    for &(r, t) in &[(0.2, 0.05), (1.0, 0.3)] {
        let got = ball_solution(&d, BallProblem::Cooling(&one), 200, BallPoint { r, theta: 0.0 }, t).unwrap();
        let want: f64 = (1..=200)
            .map(|k| {
                let kf = k as f64;
                let s = if k % 2 == 1 { 1.0 } else { -1.0 };
                s / kf * (PI * kf * r / rr).sin() * (-(PI * kf / rr).powi(2) * a2 * t).exp()
            })
            .sum::<f64>()
            * 2.0
            * t0
            * rr
            / (PI * r);
        assert!((got - want).abs() < 1e-9);
    }
    let h = 0.9;
    let rb = BallSpec::new(rr, BallBc::Robin(h), a2).unwrap();
    let (r, t) = (0.5, 0.2);
    let got = ball_solution(&rb, BallProblem::Cooling(&one), 80, BallPoint { r, theta: 0.0 }, t).unwrap();
    let hr = h * rr;
    let want: f64 = (1..=80)
        .map(|k| {
            let g = ball_radial_mode(&rb, k).unwrap().gamma;
            let s = if k % 2 == 1 { 1.0 } else { -1.0 };
            s * (g * g + (hr - 1.0).powi(2)).sqrt() / (g * (g * g + (hr - 1.0) * hr))
                * (-(g / rr).powi(2) * a2 * t).exp()
                * (g * r / rr).sin()
        })
        .sum::<f64>()
        * 2.0
        * t0
        * h
        * rr
        * rr
        / r;
    assert!((got - want).abs() < 1e-8, "{got} {want}");
    let nb = BallSpec::new(rr, BallBc::Neumann, a2).unwrap();
    let v = ball_solution(&nb, BallProblem::Cooling(&one), 10, BallPoint { r: 0.4, theta: 0.0 }, 0.5).unwrap();
    assert!((v - t0).abs() < 1e-10);
}

#[test]
fn ball_sources_steady_state() {
    let (rr, q, kappa) = (1.0, 2.0, 0.5);
    let d = BallSpec::new(rr, BallBc::Dirichlet, 1.0).unwrap();
    for &r in &[0.0, 0.3, 0.8] {
        let s = ball_solution(&d, BallProblem::Sources { q, kappa }, 20000, BallPoint { r, theta: 0.0 }, f64::INFINITY).unwrap();
        let want = ball_steady_source(&d, q, kappa, r).unwrap();
        assert!((want - q * rr * rr / (6.0 * kappa) * (1.0 - r * r)).abs() < 1e-15);
        assert!((s - want).abs() < 1e-8, "{r}: {}", s - want);
    }
    let rb = BallSpec::new(rr, BallBc::Robin(2.0), 1.0).unwrap();
    let s = ball_solution(&rb, BallProblem::Sources { q, kappa }, 4000, BallPoint { r: 0.4, theta: 0.0 }, 1e3).unwrap();
    assert!((s - ball_steady_source(&rb, q, kappa, 0.4).unwrap()).abs() < 1e-6);
    let nb = BallSpec::new(rr, BallBc::Neumann, 1.0).unwrap();
    assert!(ball_solution(&nb, BallProblem::Sources { q, kappa }, 4, BallPoint { r: 0.4, theta: 0.0 }, 1.0).is_err());
}

#[test]
fn ball_axisymmetric_problems() {
    let rr = 1.0;
    let d = BallSpec::new(rr, BallBc::Dirichlet, 0.7).unwrap();
    // radial data: the axisymmetric series reduces to the radial one
    let radial = |r: f64| 1.0 - r * r;
    let both = |r: f64, _: f64| 1.0 - r * r;
    let pt = BallPoint { r: 0.45, theta: 1.1 };
    let a = ball_solution(&d, BallProblem::AxisymCooling(&both), 6, pt, 0.05).unwrap();
    let b = ball_solution(&d, BallProblem::Cooling(&radial), 6, pt, 0.05).unwrap();
    assert!((a - b).abs() < 1e-9);
    // single mode j₁(α r)P₁(cos θ)
    let al = bessel_zero(ZeroFamily::SphericalJ, 1, 1).unwrap();
    let f = move |r: f64, th: f64| spherical_j(1, al * r) * th.cos();
    let t = 0.2;
    let v = ball_solution(&d, BallProblem::AxisymCooling(&f), 3, pt, t).unwrap();
    assert!((v - f(pt.r, pt.theta) * (-al * al * 0.7 * t).exp()).abs() < 1e-9);
    // Laplace with P₂ surface data
    let p2 = |th: f64| legendre_p(2, th.cos()).unwrap();
    for &(r, th) in &[(0.3, 0.2), (0.9, 2.0), (1.0, 1.0)] {
        let u = ball_solution(&d, BallProblem::LaplaceDirichlet(&p2), 6, BallPoint { r, theta: th }, 0.0).unwrap();
        assert!((u - r * r * p2(th)).abs() < 1e-12);
    }
    let n = BallSpec::new(rr, BallBc::Neumann, 0.7).unwrap();
    assert!(ball_solution(&n, BallProblem::AxisymCooling(&both), 2, pt, 0.1).is_err());
}

#[test]
fn ball_axisymmetric_orthonormality() {
    let rr: f64 = 1.4;
    let gl = GaussLegendre::new(32);
    let phi = |n: u32, k: usize, r: f64, th: f64| {
        let al = bessel_zero(ZeroFamily::SphericalJ, n, k).unwrap();
        // |J'_{n+1/2}(α)| = √(2α/π)|j_{n+1}(α)| at a zero of j_n
        let jp = (2.0 * al / PI).sqrt() * spherical_j(n + 1, al).abs();
        ((2 * n + 1) as f64 * al).sqrt() / (PI * rr.powf(1.5) * jp) * spherical_j(n, al * r / rr) * legendre_p(n, th.cos()).unwrap()
    };
    let idx: Vec<(u32, usize)> = (0..=3).flat_map(|n| (1..=3).map(move |k| (n, k))).collect();
    for &(n1, k1) in &idx {
        for &(n2, k2) in &idx {
            let v = 2.0 * PI
                * gl.composite(
                    |r| r * r * gl.composite(|th| th.sin() * phi(n1, k1, r, th) * phi(n2, k2, r, th), 0.0, PI, 2),
                    0.0,
                    rr,
                    3,
                );
            let want = if (n1, k1) == (n2, k2) { 1.0 } else { 0.0 };
            assert!((v - want).abs() < 1e-6, "({n1},{k1}) ({n2},{k2}) {v}");
        }
    }
}

#[test]
fn series_expansions() {
    let p3 = |x: f64| legendre_p(3, x).unwrap();
    let s = expand_series(SeriesKind::Legendre, &p3, 8).unwrap();
    for (n, c) in s.coefficients.iter().enumerate() {
        let want = if n == 3 { 1.0 } else { 0.0 };
        assert!((c - want).abs() < 1e-9);
    }
    let one = |_: f64| 1.0;
    let fb = expand_series(SeriesKind::FourierBessel { m: 0, radius: 2.0 }, &one, 10).unwrap();
    for (k, c) in fb.coefficients.iter().enumerate() {
        let al = bessel_zero(ZeroFamily::BesselJ, 0, k + 1).unwrap();
        assert!((c - 2.0 / (al * bessel_j(1, al))).abs() < 1e-10);
    }
    let abs = |x: f64| x.abs();
    let mut prev = f64::INFINITY;
    for n in [4, 8, 16, 32, 64] {
        let e = expand_series(SeriesKind::Legendre, &abs, n).unwrap().l2_error(&abs);
        assert!(e < prev);
        prev = e;
    }
    assert!(prev <= 1e-3);
    // m = 2 reconstruction of a smooth function vanishing at the edge
    let g = |r: f64| r * r * (1.0 - r * r);
    let fb2 = expand_series(SeriesKind::FourierBessel { m: 2, radius: 1.0 }, &g, 30).unwrap();
    assert!((fb2.eval(0.6) - g(0.6)).abs() < 1e-4);
}

#[test]
fn spherical_harmonics_are_normalized() {
    for n in 0..=3u32 {
        for m in -(n as i32)..=(n as i32) {
            for n2 in 0..=3u32 {
                for m2 in -(n2 as i32)..=(n2 as i32) {
                    let v = spherical_overlap(n, m, n2, m2).unwrap();
                    let want = if (n, m) == (n2, m2) { 1.0 } else { 0.0 };
                    assert!((v.re - want).abs() <= 1e-8 && v.im.abs() <= 1e-8, "{n}{m} {n2}{m2}");
                }
            }
        }
    }
}
