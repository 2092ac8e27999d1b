use super::*;
use crate::fourier;
use crate::geometry::parse_domain;
use approx::assert_abs_diff_eq;
use rand::{Rng, SeedableRng};
use std::f64::consts::PI;

fn unit_circle() -> ConvexDomain {
    parse_domain("circle:1").unwrap()
}

/// Independent oracle for the center value with data cos(2 pi x1 / eps):
/// `(1/2pi) int cos((2 pi / eps) cos t) dt` by trapezoid sums doubled until
/// stable.
fn bessel_center_value(eps: f64) -> f64 {
    let z = 2.0 * PI / eps;
    let f = |t: f64| (z * t.cos()).cos();
    let mut n = 1024usize;
    let mut prev = crate::quad::trapezoid_periodic(n, 2.0 * PI, f) / (2.0 * PI);
    loop {
        n *= 2;
        let cur = crate::quad::trapezoid_periodic(n, 2.0 * PI, f) / (2.0 * PI);
        if (cur - prev).abs() < 1e-13 || n > (1 << 22) {
            return cur;
        }
        prev = cur;
    }
}

#[test]
fn constants_are_reproduced_by_both_backends() {
    let dom = unit_circle();
    for name in ["disk", "bie"] {
        let sol = solve(&dom, &|_| 2.5, 1024, name).unwrap();
        for x in [[0.0, 0.0], [0.5, 0.2], [-0.8, 0.1], [0.0, 0.93]] {
            assert_abs_diff_eq!(sol.evaluate_interior(&x).unwrap(), 2.5, epsilon = 1e-10);
        }
    }
}

#[test]
fn first_harmonic_extends_linearly() {
    let dom = unit_circle();
    for name in ["disk", "bie"] {
        let sol = solve(&dom, &|t: f64| t.cos(), 128, name).unwrap();
        assert_abs_diff_eq!(sol.evaluate_interior(&[0.3, 0.0]).unwrap(), 0.3, epsilon = 1e-10);
        assert_abs_diff_eq!(sol.evaluate_interior(&[0.0, 0.0]).unwrap(), 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(sol.evaluate_interior(&[-0.4, 0.55]).unwrap(), -0.4, epsilon = 1e-10);
    }
}

#[test]
fn harmonic_polynomial_on_ellipse() {
    // x1^2 - x2^2 is harmonic, so its boundary restriction extends to itself.
    let dom = parse_domain("ellipse:2,1").unwrap();
    let h = |t: f64| {
        let p = dom.point(t);
        p[0] * p[0] - p[1] * p[1]
    };
    let sol = solve(&dom, &h, 512, "bie").unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 25 {
        let x = [rng.gen_range(-2.0..2.0), rng.gen_range(-1.0..1.0)];
        match dom.distance_to_boundary(&x) {
            Ok((d, _)) if d >= 0.1 => {
                let exact = x[0] * x[0] - x[1] * x[1];
                assert_abs_diff_eq!(sol.evaluate_interior(&x).unwrap(), exact, epsilon = 1e-8);
                checked += 1;
            }
            _ => {}
        }
    }
}

#[test]
fn disk_modes_decay_as_r_to_the_k() {
    let dom = unit_circle();
    let sol = solve(&dom, &|t: f64| (7.0 * t).cos(), 256, "disk").unwrap();
    assert_abs_diff_eq!(
        sol.evaluate_interior(&[0.5, 0.0]).unwrap(),
        0.5f64.powi(7),
        epsilon = 1e-12
    );
    let sol = solve(&dom, &|t: f64| (3.0 * t).cos(), 256, "bie").unwrap();
    assert_abs_diff_eq!(
        sol.evaluate_interior(&[0.5, 0.0]).unwrap(),
        0.125,
        epsilon = 1e-10
    );
}

#[test]
fn mean_value_property_at_center() {
    let dom = unit_circle();
    let h = |t: f64| (2.0 * PI * (t.cos() / 0.25)).cos() + 0.3 * (2.0 * t).sin();
    let sol = solve(&dom, &h, 1024, "disk").unwrap();
    let mean = sol.data.iter().sum::<f64>() / sol.data.len() as f64;
    assert_abs_diff_eq!(sol.evaluate_interior(&[0.0, 0.0]).unwrap(), mean, epsilon = 1e-10);
}

#[test]
fn maximum_principle_holds() {
    let dom = unit_circle();
    let g = fourier::builtin("cos1").unwrap();
    let settings = SolverSettings::default();
    for name in ["disk", "bie"] {
        let sol = solve_oscillating(&dom, &g, 0.25, None, Some(name), &settings).unwrap();
        let (lo, hi) = sol
            .data
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let r = rng.gen_range(0.0..0.95f64);
            let t = rng.gen_range(0.0..2.0 * PI);
            let u = sol.evaluate_interior(&[r * t.cos(), r * t.sin()]).unwrap();
            assert!(u >= lo - 1e-8 && u <= hi + 1e-8, "{name}: u = {u} outside [{lo}, {hi}]");
        }
    }
}

#[test]
fn backends_agree_on_the_circle() {
    let dom = unit_circle();
    let g = fourier::builtin("cos1").unwrap();
    let settings = SolverSettings::default();
    // effective boundary frequency max_freq / eps = 8 <= 128
    let eps = 0.125;
    let disk = solve_oscillating(&dom, &g, eps, None, Some("disk"), &settings).unwrap();
    let bie = solve_oscillating(&dom, &g, eps, None, Some("bie"), &settings).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
    let mut done = 0;
    while done < 50 {
        let r = rng.gen_range(0.0..0.95f64);
        let t = rng.gen_range(0.0..2.0 * PI);
        let x = [r * t.cos(), r * t.sin()];
        if 1.0 - r < 0.05 {
            continue;
        }
        let a = disk.evaluate_interior(&x).unwrap();
        let b = bie.evaluate_interior(&x).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-8);
        done += 1;
    }
}

#[test]
fn oscillating_solve_matches_plain_solve_at_eps_one() {
    let dom = unit_circle();
    let g = fourier::builtin("cos1").unwrap();
    let settings = SolverSettings::default();
    let osc = solve_oscillating(&dom, &g, 1.0, None, Some("disk"), &settings).unwrap();
    let n = osc.resolution();
    let plain = solve(&dom, &|t: f64| (2.0 * PI * t.cos()).cos(), n, "disk").unwrap();
    for x in [[0.2, 0.1], [0.0, 0.0], [-0.5, -0.3]] {
        assert_abs_diff_eq!(
            osc.evaluate_interior(&x).unwrap(),
            plain.evaluate_interior(&x).unwrap(),
            epsilon = 1e-12
        );
    }
}

#[test]
fn constant_data_stays_constant_for_every_eps() {
    let dom = unit_circle();
    let g = fourier::FourierData::new(2, [(vec![0, 0], num_complex::Complex64::new(1.7, 0.0))]).unwrap();
    let settings = SolverSettings::default();
    for eps in [1.0, 0.25, 1.0 / 64.0] {
        let sol = solve_oscillating(&dom, &g, eps, None, None, &settings).unwrap();
        for x in [[0.0, 0.0], [0.6, 0.6], [0.0, -0.9]] {
            assert_abs_diff_eq!(sol.evaluate_interior(&x).unwrap(), 1.7, epsilon = 1e-10);
        }
    }
}

#[test]
fn center_value_matches_bessel_oracle() {
    let dom = unit_circle();
    let g = fourier::builtin("cos1").unwrap();
    let settings = SolverSettings::default();
    for eps in [0.125, 0.0625, 0.03125] {
        let sol = solve_oscillating(&dom, &g, eps, None, Some("disk"), &settings).unwrap();
        let u0 = sol.evaluate_interior(&[0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(u0, bessel_center_value(eps), epsilon = 1e-8);
    }
}

#[test]
fn resolution_rule_and_cap() {
    let dom = unit_circle();
    let g = fourier::builtin("cos1").unwrap();
    let settings = SolverSettings::default();
    let floor = resolution_floor(&dom, &g, 0.0625, &settings).unwrap();
    let mut expected = (20.0 * dom.perimeter() / 0.0625).ceil() as usize;
    expected += expected % 2;
    assert_eq!(floor, expected);
    assert_eq!(floor % 2, 0);
    // an explicit n below the floor is raised to it
    let sol = solve_oscillating(&dom, &g, 0.0625, Some(16), None, &settings).unwrap();
    assert_eq!(sol.resolution(), floor);
    // the hard cap turns into an error advising larger eps
    let tiny = SolverSettings { node_cap: 1024, ..Default::default() };
    assert!(matches!(
        solve_oscillating(&dom, &g, 1e-3, None, None, &tiny),
        Err(Error::ResolutionCap { .. })
    ));
    assert!(solve_oscillating(&dom, &g, 0.0, None, None, &settings).is_err());
}

#[test]
fn input_validation() {
    let dom = unit_circle();
    assert!(solve(&dom, &|_| 1.0, 15, "disk").is_err());
    assert!(solve(&dom, &|_| 1.0, 18, "disk").is_ok());
    assert!(solve(&dom, &|_| 1.0, 17, "disk").is_err());
    assert!(backend("fem").is_err());
    // disk backend refuses non-circle domains
    let ell = parse_domain("ellipse:2,1").unwrap();
    assert!(matches!(
        solve(&ell, &|_| 1.0, 64, "disk"),
        Err(Error::UnsupportedDomain { .. })
    ));
    // evaluation outside the domain is rejected
    let sol = solve(&dom, &|_| 1.0, 64, "disk").unwrap();
    assert!(sol.evaluate_interior(&[1.0, 0.0]).is_err());
    assert!(sol.evaluate_interior(&[1.5, 0.0]).is_err());
}

#[test]
fn doubling_resolution_is_converged() {
    let dom = unit_circle();
    let h = |t: f64| (6.0 * t).cos() + 0.5 * (2.0 * t).sin();
    for name in ["disk", "bie"] {
        let n = 256;
        let a = solve(&dom, &h, n, name).unwrap();
        let b = solve(&dom, &h, 2 * n, name).unwrap();
        let dmin = 10.0 * dom.perimeter() / n as f64;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let r = rng.gen_range(0.0..(1.0 - dmin));
            let t = rng.gen_range(0.0..2.0 * PI);
            let x = [r * t.cos(), r * t.sin()];
            let ua = a.evaluate_interior(&x).unwrap();
            let ub = b.evaluate_interior(&x).unwrap();
            assert!((ua - ub).abs() < 1e-9, "{name}: |du| = {:e}", (ua - ub).abs());
        }
    }
}

#[test]
fn ring_fast_path_matches_pointwise_evaluation() {
    let dom = unit_circle();
    let g = fourier::builtin("cos1").unwrap();
    let settings = SolverSettings::default();
    let sol = solve_oscillating(&dom, &g, 0.125, None, Some("disk"), &settings).unwrap();
    let dist = 0.3;
    let m = 64;
    let ring = sol.evaluate_ring(dist, m).unwrap();
    for (j, &v) in ring.iter().enumerate() {
        let t = 2.0 * PI * j as f64 / m as f64;
        let x = [(1.0 - dist) * t.cos(), (1.0 - dist) * t.sin()];
        assert_abs_diff_eq!(v, sol.evaluate_interior(&x).unwrap(), epsilon = 1e-10);
    }
    assert!(sol.evaluate_ring(0.0, m).is_err());
    assert!(sol.evaluate_ring(1.0, m).is_err());
}

#[test]
fn bie_ring_evaluation_walks_the_offset_curve() {
    let dom = parse_domain("ellipse:2,1").unwrap();
    let sol = solve(&dom, &|t: f64| (2.0 * t).cos(), 256, "bie").unwrap();
    let ring = sol.evaluate_ring(0.4, 16).unwrap();
    let t0 = 0.0;
    let p = dom.point(t0);
    let nrm = dom.normal(t0);
    let x = [p[0] - 0.4 * nrm[0], p[1] - 0.4 * nrm[1]];
    assert_abs_diff_eq!(ring[0], sol.evaluate_interior(&x).unwrap(), epsilon = 1e-12);
}
