use std::f64::consts::PI;

use proptest::prelude::*;
use sepvar::varsolve::*;

fn fam(kind: TransKind, alpha: f64) -> RootSet {
    solve_transcendental(TranscendentalFamily { kind, alpha }).unwrap()
}

#[test]
fn catenoid_roots() {
    let (u_star, a_star) = catenoid_threshold().unwrap();
    assert!((a_star - 1.509).abs() <= 1e-3);
    let none = fam(TransKind::Cosh, 1.4);
    assert_eq!(none.class, RootClass::NoSmoothCatenoid);
    assert!(none.roots.is_empty());
    let tan = fam(TransKind::Cosh, a_star);
    assert_eq!(tan.class, RootClass::Tangent);
    assert!((tan.roots[0].u - u_star).abs() < 1e-6 && tan.roots[0].tangent);
    let two = fam(TransKind::Cosh, 2.0);
    assert_eq!(two.class, RootClass::TwoCatenoids);
    for r in &two.roots {
        assert!((r.u.cosh() - 2.0 * r.u).abs() < 1e-12);
    }
    // closed form of the energy: (1/u)(1 + sh 2u/(2u))
    for (r, e) in two.roots.iter().zip(&two.energies) {
        let c = (1.0 + (2.0 * r.u).sinh() / (2.0 * r.u)) / r.u;
        assert!((e - c).abs() < 1e-10 * c);
    }
    // the fatter neck (smaller u) has the lower energy
    assert_eq!(two.physical, Some(0));
    assert!(two.energies[0] < two.energies[1]);
}

#[test]
fn chain_threshold() {
    let below = fam(TransKind::Sinh, 1.0);
    assert!(below.roots.is_empty() && below.trivial);
    assert_eq!(below.class, RootClass::TrivialOnly);
    let just = fam(TransKind::Sinh, 1.0 + 1e-10);
    assert_eq!(just.roots.len(), 1);
    let u = just.roots[0].u;
    assert!(u > 0.0 && (u - (6e-10f64).sqrt()).abs() < 1e-8);
    assert!(fam(TransKind::Sinh, 1.0 - 1e-10).roots.is_empty());
    let r = fam(TransKind::Sinh, 3.0).roots[0].u;
    assert!((r.sinh() - 3.0 * r).abs() < 1e-12);
}

#[test]
fn arc_condition() {
    assert_eq!(fam(TransKind::Arcsin, 1.3).roots.len(), 1);
    let r = fam(TransKind::Arcsin, 1.3).roots[0].u;
    assert!((r.asin() - 1.3 * r).abs() < 1e-12);
    assert_eq!(fam(TransKind::Arcsin, PI / 2.0).roots[0].u, 1.0);
    assert_eq!(fam(TransKind::Arcsin, 1.6).class, RootClass::NoSingleValuedArc);
    assert!(fam(TransKind::Arcsin, 0.9).roots.is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chain_nonempty_iff_alpha_above_one(alpha in 0.2..5.0f64) {
        let s = fam(TransKind::Sinh, alpha);
        prop_assert_eq!(!s.roots.is_empty(), alpha > 1.0);
    }

    #[test]
    fn cycloid_fit_hits_endpoint(l in 0.1..10.0f64, ratio in 0.05..20.0f64) {
        let h = l * ratio;
        let fit = brachistochrone_fit(l, h, 9.81).unwrap();
        prop_assert!((fit.x(fit.phi2) - l).abs() < 1e-10 * l.max(h));
        prop_assert!((fit.y(fit.phi2) - h).abs() < 1e-10 * l.max(h));
        let r = (1.0 - fit.phi2.cos()) / (fit.phi2 - fit.phi2.sin());
        prop_assert!((r - ratio).abs() < 1e-10 * ratio);
    }
}

#[test]
fn half_turn_cycloid() {
    let (l, g) = (3.0, 9.81);
    let fit = brachistochrone_fit(l, 2.0 * l / PI, g).unwrap();
    assert!((fit.phi2 - PI).abs() < 1e-9);
    assert!((fit.c1 - l / PI).abs() < 1e-9);
    assert!((fit.time - PI / 2.0 / (g / (4.0 * fit.c1)).sqrt()).abs() < 1e-12);
    let line = brachistochrone_to_line(l, g).unwrap();
    for i in 0..=10 {
        let p = PI * i as f64 / 10.0;
        assert!((line.x(p) - l / PI * (p - p.sin())).abs() < 1e-9);
    }
    // first integral y(1 + y′²) = 2C₁
    for i in 1..20 {
        let p = 2.0 * PI * i as f64 / 20.0 * 0.999;
        let yp = 1.0 / (p / 2.0).tan();
        let v = fit.y(p) * (1.0 + yp * yp);
        assert!((v / (2.0 * fit.c1) - 1.0).abs() < 1e-8);
    }
    assert!(brachistochrone_fit(1.0, -1.0, g).is_err());
}

#[test]
fn euler_lagrange_residuals() {
    let arc = |_: f64, _: f64, p: f64| (1.0 + p * p).sqrt();
    let line = |x: f64| 0.3 + 1.7 * x;
    let grid: Vec<f64> = (1..20).map(|i| i as f64 / 20.0).collect();
    assert!(el_residual(&arc, &line, &grid).unwrap() <= 1e-8);
    let parabola = |x: f64| x * x;
    assert!(el_residual(&arc, &parabola, &grid).unwrap() > 1e-2);

    let fit = brachistochrone_fit(2.0, 1.3, 9.81).unwrap();
    let time = |_: f64, y: f64, p: f64| (1.0 + p * p).sqrt() / y.sqrt();
    let y = |x: f64| fit.y_of_x(x).unwrap();
    let grid: Vec<f64> = (2..19).map(|i| 2.0 * i as f64 / 20.0).collect();
    assert!(el_residual(&time, &y, &grid).unwrap() <= 1e-5);

    let c1 = 0.8;
    let surf = |_: f64, y: f64, p: f64| y * (1.0 + p * p).sqrt();
    let cat = move |x: f64| c1 * ((x + 0.2) / c1).cosh();
    let grid: Vec<f64> = (0..=20).map(|i| -1.0 + i as f64 / 10.0).collect();
    assert!(el_residual(&surf, &cat, &grid).unwrap() <= 1e-6);
}

#[test]
fn sphere_geodesics() {
    let r = 2.0;
    let mer = geodesic(Surface::Sphere(r), (0.4, 1.1), (2.0, 1.1)).unwrap();
    assert_eq!(mer.shape, GeodesicShape::Meridian);
    assert!((mer.length - r * 1.6).abs() < 1e-12);
    for i in 0..=10 {
        assert!((mer.surface_coords(i as f64 / 10.0).1 - 1.1).abs() < 1e-12);
    }
    let g = geodesic(Surface::Sphere(r), (0.5, 0.2), (1.9, 2.4)).unwrap();
    assert_eq!(g.shape, GeodesicShape::GreatCircle);
    let (a, b) = g.constants;
    let mut arclen = 0.0;
    let mut prev = g.point(0.0);
    for i in 0..=200 {
        let p = g.point(i as f64 / 200.0);
        assert!((p[2] - a * p[0] - b * p[1]).abs() <= 1e-9);
        assert!(((p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt() - r).abs() < 1e-12);
        arclen += ((p[0] - prev[0]).powi(2) + (p[1] - prev[1]).powi(2) + (p[2] - prev[2]).powi(2)).sqrt();
        prev = p;
    }
    assert!((arclen - g.length).abs() < 1e-4);
    let end = g.surface_coords(1.0);
    assert!((end.0 - 1.9).abs() < 1e-12 && (end.1 - 2.4).abs() < 1e-12);
    // C₁* ctg θ = cos(φ + C₂) with C₁* = 1/√(A²+B²), C₂ = −atan2(B, A)
    let (c1, c2) = (1.0 / a.hypot(b), -b.atan2(a));
    for i in 0..=10 {
        let (th, ph) = g.surface_coords(i as f64 / 10.0);
        assert!((c1 / th.tan() - (ph + c2).cos()).abs() < 1e-9);
    }
    assert!(geodesic(Surface::Sphere(r), (0.7, 0.3), (PI - 0.7, 0.3 + PI)).is_err());
}

#[test]
fn cylinder_geodesics() {
    let r = 1.5;
    let v = geodesic(Surface::Cylinder(r), (0.7, 0.0), (0.7, 2.0)).unwrap();
    assert_eq!(v.shape, GeodesicShape::VerticalSegment);
    assert!((v.length - 2.0).abs() < 1e-15);
    let c = geodesic(Surface::Cylinder(r), (0.2, 1.0), (1.4, 1.0)).unwrap();
    assert_eq!(c.shape, GeodesicShape::CircleArc);
    assert!((c.length - r * 1.2).abs() < 1e-14);
    let h = geodesic(Surface::Cylinder(r), (6.0, 0.0), (0.5, 1.0)).unwrap();
    assert_eq!(h.shape, GeodesicShape::Helix);
    let dphi = 0.5 + 2.0 * PI - 6.0;
    assert!((h.length - (r * dphi).hypot(1.0)).abs() < 1e-12);
}

#[test]
fn cone_geodesics() {
    let a = 0.6;
    let gen = geodesic(Surface::Cone(a), (1.0, 0.5), (1.0, 2.0)).unwrap();
    assert_eq!(gen.shape, GeodesicShape::Generator);
    assert_eq!(gen.constants.0, 0.0);
    assert!((gen.length - 1.5 * (1.0 + a * a).sqrt()).abs() < 1e-12);

    let (p1, p2) = ((0.3, 1.0), (2.1, 1.6));
    let g = geodesic(Surface::Cone(a), p1, p2).unwrap();
    assert_eq!(g.shape, GeodesicShape::ConeArc);
    let e0 = g.surface_coords(0.0);
    let e1 = g.surface_coords(1.0);
    assert!((e0.0 - p1.0).abs() < 1e-12 && (e0.1 - p1.1).abs() < 1e-12);
    assert!((e1.0 - p2.0).abs() < 1e-12 && (e1.1 - p2.1).abs() < 1e-12);
    // φ = C₂ + (√(1+a²)/a) arcsin(C₁/(az)) along the curve
    let (c1, c2) = g.constants;
    let k = (1.0 + a * a).sqrt();
    for i in 0..=10 {
        let (ph, z) = g.surface_coords(i as f64 / 10.0);
        assert!((z * a * (a * (ph - c2) / k).sin() - c1).abs() < 1e-9);
    }
    // Euler–Lagrange residual of φ(z) for dl/dz = √(a²z²φ′² + 1 + a²)
    let phi_of_z = |z: f64| c2 + k / a * (c1 / (a * z)).asin();
    let metric = |z: f64, _: f64, p: f64| (a * a * z * z * p * p + 1.0 + a * a).sqrt();
    let grid: Vec<f64> = (0..=10).map(|i| 1.2 + 0.3 * i as f64 / 10.0).collect();
    assert!(el_residual(&metric, &phi_of_z, &grid).unwrap() < 1e-6);
    // the developed segment is shorter than a nearby perturbed path
    let len = |eps: f64| {
        let n = 2000;
        let mut s = 0.0;
        let mut prev = g.point(0.0);
        for i in 1..=n {
            let t = i as f64 / n as f64;
            let (ph, z) = g.surface_coords(t);
            let z = z + eps * (PI * t).sin();
            let p = [a * z * ph.cos(), a * z * ph.sin(), z];
            s += ((p[0] - prev[0]).powi(2) + (p[1] - prev[1]).powi(2) + (p[2] - prev[2]).powi(2)).sqrt();
            prev = p;
        }
        s
    };
    assert!((len(0.0) - g.length).abs() < 1e-6);
    assert!(len(0.02) > g.length && len(-0.02) > g.length);
}
