use std::f64::consts::PI;

use proptest::prelude::*;
use sepvar::heat1d::*;
use sepvar::quad::gauss_kronrod;
use sepvar::specfun::erf;
use sepvar::sturm::Boundary;

fn spectral_robin(h: f64, a2: f64, x: f64, y: f64, t: f64) -> f64 {
    let xk = |k: f64, z: f64| (2.0 / PI).sqrt() * ((k * z).cos() + h / k * (k * z).sin()) / (1.0 + h * h / (k * k)).sqrt();
    let top = 40.0 / t.sqrt();
    let pieces: Vec<f64> = (0..=400).map(|i| top * i as f64 / 400.0).collect();
    sepvar::quad::gauss_kronrod_points(|k| (-a2 * k * k * t).exp() * xk(k, x) * xk(k, y), &pieces, 1e-15, 1e-12).value
}

#[test]
fn robin_kernel_equals_spectral_integral() {
    let m = HeatMedium::new(1.0).unwrap();
    let g = heat_halfline_kernel(HalfLineBc::Robin(1.0), m, 0.3, 0.7, 0.5).unwrap();
    let s = spectral_robin(1.0, 1.0, 0.3, 0.7, 0.5);
    assert!(((g - s) / s).abs() < 1e-5, "{g} vs {s}");
    for &(h, x, y, t) in &[(0.3, 0.0, 1.0, 0.2), (4.0, 1.2, 0.4, 1.5)] {
        let g = heat_halfline_kernel(HalfLineBc::Robin(h), m, x, y, t).unwrap();
        let s = spectral_robin(h, 1.0, x, y, t);
        assert!(((g - s) / s).abs() < 1e-5);
    }
}

#[test]
fn line_kernel_mass_and_semigroup() {
    let m = HeatMedium::new(0.8).unwrap();
    for &t in &[0.01, 0.5, 7.0] {
        let w = (4.0 * m.a2 * t).sqrt();
        let mass = gauss_kronrod(|y| line_kernel(m, 0.3, y, t).unwrap(), 0.3 - 10.0 * w, 0.3 + 10.0 * w, 1e-14, 1e-12).value;
        assert!((mass - 1.0).abs() < 1e-8);
    }
    let (t1, t2) = (0.3, 0.9);
    for &(x, y) in &[(0.0, 0.5), (1.0, -1.0)] {
        let conv = gauss_kronrod(
            |z| line_kernel(m, x, z, t1).unwrap() * line_kernel(m, z, y, t2).unwrap(),
            -20.0,
            20.0,
            1e-15,
            1e-12,
        )
        .value;
        let direct = line_kernel(m, x, y, t1 + t2).unwrap();
        assert!((conv - direct).abs() < 1e-7 * direct.max(1.0));
    }
}

#[test]
fn halfline_kernels_are_non_negative() {
    let m = HeatMedium::new(1.1).unwrap();
    for bc in [HalfLineBc::Dirichlet, HalfLineBc::Neumann, HalfLineBc::Robin(0.7), HalfLineBc::Robin(30.0)] {
        for i in 0..20 {
            for j in 0..20 {
                let (x, y) = (0.1 * i as f64, 0.15 * j as f64);
                assert!(heat_halfline_kernel(bc, m, x, y, 0.4).unwrap() >= 0.0);
            }
        }
    }
}

#[test]
fn sink_scales_solution() {
    let plain = HeatMedium::new(0.5).unwrap();
    let sunk = HeatMedium::with_sink(0.5, 0.8).unwrap();
    let u0 = |x: f64| (-(x - 1.0).powi(2)).exp();
    for bc in [HalfLineBc::Dirichlet, HalfLineBc::Robin(2.0)] {
        let a = heat_halfline_eval(&u0, bc, None, plain, 0.5, 1.2).unwrap().value;
        let b = heat_halfline_eval(&u0, bc, None, sunk, 0.5, 1.2).unwrap().value;
        assert!((b - a * (-0.8f64 * 1.2).exp()).abs() < 1e-12);
    }
}

#[test]
fn delta_limit_is_first_order() {
    let m = HeatMedium::new(1.0).unwrap();
    let u0 = |x: f64| if x.abs() < 1.0 { (1.0 - x * x).powi(3) } else { 0.0 };
    let x = 0.3;
    for &t in &[1e-2, 1e-3, 1e-4] {
        let e = (heat_line_eval_split(&u0, &[-1.0, 1.0], None, m, x, t).unwrap().value - u0(x)).abs();
        assert!(e <= 10.0 * t, "t={t}: {e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn maximum_principle(x in -3.0..3.0f64, t in 0.001..4.0f64, c in 0.5..3.0f64) {
        let m = HeatMedium::new(0.9).unwrap();
        let big = 2.0;
        let u0 = move |y: f64| big * (c * y).sin().powi(2) * if y > 0.5 { 1.0 } else { 0.3 };
        let v = heat_line_eval_split(&u0, &[0.5], None, m, x, t).unwrap().value;
        prop_assert!(v >= -1e-9 && v <= big + 1e-9);
    }
}

#[test]
fn slab_tenfold_drop_time() {
    let (l, a2) = (2.0, 0.7);
    let m = HeatMedium::new(a2).unwrap();
    let u0 = |_: f64| 1.0;
    let sol = heat_interval_modes(m, l, Boundary::Dirichlet, Boundary::Dirichlet, &u0, None, 64).unwrap();
    let tau = sol.relaxation_times();
    let late = 3.0 * tau[1];
    let dt = sol.decay_time(10.0, late).unwrap();
    let want = 0.23 * l * l / a2;
    assert!(((dt - want) / want).abs() < 0.03, "{}", dt * a2 / (l * l));
    let r = ((dt - 10f64.ln() * tau[0]) / dt).abs();
    assert!(r < 1e-3, "{r}");
}

#[test]
fn tube_equilibrates_to_average() {
    let (l, h, c0) = (3.0, 0.8, 2.5);
    let m = HeatMedium::new(0.4).unwrap();
    let u0 = move |x: f64| if x <= h { c0 } else { 0.0 };
    let sol = heat_interval_modes(m, l, Boundary::NEUMANN, Boundary::NEUMANN, &u0, None, 40).unwrap();
    for &x in &[0.0, 1.0, 3.0] {
        assert!((sol.value(x, 400.0) - c0 * h / l).abs() < 1e-9);
    }
    let flat = |_: f64| 1.7;
    let sol = heat_interval_modes(m, l, Boundary::NEUMANN, Boundary::NEUMANN, &flat, None, 8).unwrap();
    assert!((sol.value(1.3, 0.01) - 1.7).abs() < 1e-12);
    for n in 2..=8 {
        assert!(sol.coefficients[n - 1].abs() < 1e-13);
    }
}

#[test]
fn late_time_log_slope() {
    let l = 1.0;
    let m = HeatMedium::new(0.5).unwrap();
    let u0 = |x: f64| x * (1.0 - x) + 0.3 * x;
    let sol = heat_interval_modes(m, l, Boundary::Robin(1.0), Boundary::Robin(2.0), &u0, None, 24).unwrap();
    let t = 3.0 * sol.relaxation_times()[1];
    let norm = |t: f64| gauss_kronrod(|x| sol.value(x, t).powi(2), 0.0, l, 1e-15, 1e-12).value.sqrt();
    let d = 1e-3;
    let slope = (norm(t + d).ln() - norm(t - d).ln()) / (2.0 * d);
    let want = -m.a2 * sol.eigenvalue(1);
    assert!(((slope - want) / want).abs() < 0.01);
}

#[test]
fn forced_interval_reaches_parabolic_steady_state() {
    let (l, a2, f0) = (1.0, 0.6, 1.5);
    let m = HeatMedium::new(a2).unwrap();
    let zero = |_: f64| 0.0;
    let src = move |_: f64, _: f64| f0;
    let sol = heat_interval_modes(m, l, Boundary::Dirichlet, Boundary::Dirichlet, &zero, Some(&src), 40).unwrap();
    let x = 0.35;
    let steady = f0 * x * (l - x) / (2.0 * a2);
    assert!((sol.value(x, 20.0) - steady).abs() < 1e-4);
    let truncated: f64 = (1..=40)
        .map(|n| {
            let k = PI * n as f64 / l;
            let b = f0 * (2.0 / l).sqrt() * (1.0 - (-1f64).powi(n)) / k;
            b / (a2 * k * k) * (2.0 / l).sqrt() * (k * x).sin()
        })
        .sum();
    let e = (sol.value(x, 20.0) - truncated).abs();
    assert!(e < 1e-9, "{e}");
    // early times: u ≈ f₀t away from the ends
    assert!((sol.value(0.5, 0.01) - f0 * 0.01).abs() < 1e-5);
}

#[test]
fn modal_and_image_routes_agree() {
    let l = 1.0;
    let m = HeatMedium::new(1.0).unwrap();
    let u0 = |x: f64| x * (1.0 - x).powi(2);
    for (a, b) in [
        (Boundary::Dirichlet, Boundary::Dirichlet),
        (Boundary::Dirichlet, Boundary::NEUMANN),
        (Boundary::NEUMANN, Boundary::Dirichlet),
        (Boundary::NEUMANN, Boundary::NEUMANN),
    ] {
        let sol = heat_interval_modes(m, l, a, b, &u0, None, 80).unwrap();
        let t = 0.01;
        assert!(sol.required_modes(t) <= 80);
        for &x in &[0.1, 0.5, 0.9] {
            let img = heat_interval_images(m, l, a, b, &u0, x, t).unwrap().value;
            assert!((img - sol.value(x, t)).abs() < 1e-9, "{a:?}/{b:?} x={x}");
        }
    }
    assert!(heat_interval_images(m, l, Boundary::Robin(1.0), Boundary::Dirichlet, &u0, 0.3, 0.1).is_err());
}

#[test]
fn freq_kernel_flux_jump() {
    let m = HeatMedium::new(0.8).unwrap();
    let (c_rho, l, w) = (1.7, 2.0, 3.0);
    let y = 0.9;
    let d = 1e-6;
    let g = |x: f64| freq_green_heat(m, c_rho, l, w, x, y).unwrap();
    let left = (g(y) - g(y - d)) / d;
    let right = (g(y + d) - g(y)) / d;
    let jump = left - right;
    let want = 1.0 / (c_rho * m.a2);
    assert!((jump.re - want).abs() < 1e-6 && jump.im.abs() < 1e-6, "{jump}");
    // against the modal series (2/cρl) Σ sin sin/(λ_n a² − iω)
    let x = 0.4;
    let mut s = num_complex::Complex64::new(0.0, 0.0);
    for n in 1..=20000 {
        let k = PI * n as f64 / l;
        s += (k * x).sin() * (k * y).sin() / num_complex::Complex64::new(k * k * m.a2, -w);
    }
    s *= 2.0 / (c_rho * l);
    assert!((s - g(x)).norm() / g(x).norm() < 1e-4);
}

#[test]
fn halfline_closed_forms() {
    let m = HeatMedium::new(1.4).unwrap();
    let t0 = 2.0;
    let u0 = move |_: f64| t0;
    for &(x, t) in &[(0.05, 0.01), (0.5, 0.3), (3.0, 2.0)] {
        let v = heat_halfline_eval(&u0, HalfLineBc::Dirichlet, None, m, x, t).unwrap().value;
        assert!((v - t0 * erf(x / (4.0 * m.a2 * t).sqrt())).abs() < 1e-6);
    }
}

#[test]
fn tube_equilibration_is_four_efoldings() {
    let (l, h, c0, d) = (2.0, 0.6, 1.0, 0.3);
    let m = HeatMedium::new(d).unwrap();
    let u0 = move |x: f64| if x <= h { c0 } else { 0.0 };
    let sol = heat_interval_modes(m, l, Boundary::NEUMANN, Boundary::NEUMANN, &u0, None, 200).unwrap();
    let dt = 4.0 * l * l / (PI * PI * d);
    assert!((dt * d / (l * l) - 0.4).abs() < 0.01);
    // the slowest non-constant mode has decayed by e⁻⁴
    let r = sol.amplitude(2, dt) / sol.amplitude(2, 0.0);
    assert!((r - (-4f64).exp()).abs() < 1e-12);
    let eq = c0 * h / l;
    let dev = (0..=40).map(|i| (sol.value(l * i as f64 / 40.0, dt) - eq).abs()).fold(0.0, f64::max);
    assert!(dev < 0.05 * eq, "{dev}");
}

#[test]
fn line_solution_satisfies_heat_equation() {
    let m = HeatMedium::new(0.7).unwrap();
    let u0 = |x: f64| (-x * x).exp() * (1.0 + 0.5 * (3.0 * x).sin());
    let u = |x: f64, t: f64| heat_line_eval(&u0, None, m, x, t).unwrap().value;
    let (x, t) = (0.4, 0.3);
    let res = |h: f64| {
        let ut = (u(x, t + h) - u(x, t - h)) / (2.0 * h);
        let uxx = (u(x + h, t) - 2.0 * u(x, t) + u(x - h, t)) / (h * h);
        (ut - m.a2 * uxx).abs()
    };
    let (r1, r2) = (res(0.04), res(0.02));
    assert!((r1 / r2).log2() >= 1.8, "{r1} {r2}");
}
