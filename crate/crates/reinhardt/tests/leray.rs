use proptest::prelude::*;
use reinhardt::geometry::*;
use reinhardt::leray::*;
use reinhardt::numerics::QuadConfig;
use reinhardt::Error;

fn cfg() -> QuadConfig {
    QuadConfig::default()
}

fn egg(p: f64, a1: f64, a2: f64) -> DomainGeometry {
    domain_from_exponent(&ExponentProfile::egg(p, a1, a2).unwrap(), &cfg()).unwrap()
}

fn numeric_egg(p: f64) -> DomainGeometry {
    domain_from_exponent_numeric(&ExponentProfile::egg(p, 1.0, 1.0).unwrap(), &cfg()).unwrap()
}

fn example() -> DomainGeometry {
    domain_from_exponent(&ExponentProfile::expression("2+1/log(10/s)", 1.0, 1.0).unwrap(), &cfg()).unwrap()
}

/// Beta function by factorial arithmetic for integer arguments.
fn beta_int(a: u64, b: u64) -> f64 {
    let f = |n: u64| (1..=n).map(|k| k as f64).product::<f64>();
    f(a - 1) * f(b - 1) / f(a + b - 1)
}

#[test]
fn moment_examples() {
    let ball = egg(2.0, 1.0, 1.0);
    let t = moment_table(&ball, 3, 3, &cfg()).unwrap();
    assert!((t.log_i(1, 1).unwrap().exp() - 1.0 / 6.0).abs() < 1e-15);
    assert_eq!(t.log_i(0, 0).unwrap(), 0.0);
    assert!(matches!(t.log_i(4, 0), Err(Error::IndexOutOfTable { m1: 4, m2: 0 })));

    // B(2, 3/2) = Γ(2)Γ(3/2)/Γ(7/2) = (√π/2) / (15√π/8).
    let e4 = numeric_egg(4.0);
    let i = log_moment(&e4, 2.0, 1.0, MomentKind::Primal, &cfg()).unwrap();
    assert!((i.log_value.exp() / (4.0 / 15.0) - 1.0).abs() < 1e-10);

    for g in [example(), numeric_egg(3.0)] {
        let q = log_moment(&g, 0.0, 0.0, MomentKind::Primal, &cfg()).unwrap();
        assert!(q.log_value.abs() < 1e-12);
    }
}

#[test]
fn numeric_ball_moments_match_integer_beta() {
    let g = numeric_egg(2.0);
    for (a, b) in [(0u64, 5u64), (3, 3), (7, 2), (10, 10)] {
        let q = log_moment(&g, a as f64, b as f64, MomentKind::Primal, &cfg()).unwrap();
        assert!((q.log_value.exp() / beta_int(a + 1, b + 1) - 1.0).abs() < 1e-10);
    }
}

#[test]
fn moment_table_is_log_convex() {
    // Cauchy–Schwarz: ln I is convex in each degree, so its steps increase.
    for g in [example(), numeric_egg(1.5)] {
        let t = moment_table(&g, 30, 30, &cfg()).unwrap();
        assert!(t.all_converged());
        for a in 0..30 {
            for b in 0..=28 {
                let d = |m: u32| t.log_i(a, m + 1).unwrap() - t.log_i(a, m).unwrap();
                assert!(d(b + 1) >= d(b) - 1e-12);
                let e = |m: u32| t.log_i(m + 1, a).unwrap() - t.log_i(m, a).unwrap();
                assert!(e(b + 1) >= e(b) - 1e-12);
            }
        }
    }
}

#[test]
fn gamma_coefficient() {
    assert!((log_gamma_coefficient(1, 1).exp() - 6.0).abs() < 1e-13);
    assert!((log_gamma_coefficient(0, 0).exp() - 1.0).abs() < 1e-15);
    assert!((log_gamma_coefficient(3, 2).exp() - 60.0).abs() < 1e-12);
}

#[test]
fn ball_norms_are_one() {
    for g in [egg(2.0, 1.0, 1.0), numeric_egg(2.0)] {
        let grid = leray_norm_grid(&g, 20, 20, &cfg()).unwrap();
        for (_, _, v, _) in grid.entries() {
            assert!(v.abs() < 1e-8);
        }
    }
}

#[test]
fn norms_are_at_least_one() {
    for g in [example(), numeric_egg(4.0), egg(1.25, 2.0, 0.5)] {
        let grid = leray_norm_grid(&g, 25, 25, &cfg()).unwrap();
        assert!(grid.log_norm_sq.iter().all(|v| *v >= -1e-8));
    }
}

#[test]
fn large_degree_entry_is_finite_and_near_the_ray_limit() {
    let g = egg(4.0, 1.0, 1.0);
    let e = log_leray_norm_sq(&g, 50, 50, &cfg()).unwrap();
    assert!(e.log_norm_sq.is_finite());
    let limit = ray_limit_predictor(&g, 1.0).unwrap();
    assert!((e.log_norm_sq.exp() / limit - 1.0).abs() < 0.01);
}

#[test]
fn predictor_examples() {
    assert!((ray_limit_predictor(&egg(2.0, 1.0, 1.0), 0.3).unwrap() - 1.0).abs() < 1e-15);
    assert!((ray_limit_predictor(&egg(4.0, 1.0, 1.0), 1.0).unwrap() - 2.0 / 3f64.sqrt()).abs() < 1e-15);
    assert!((ray_limit_predictor(&egg(64.0, 1.0, 1.0), 1.0).unwrap() - 0.5 * (64.0 * 64.0 / 63.0f64).sqrt()).abs() < 1e-14);
    assert!(matches!(ray_limit_predictor(&egg(4.0, 1.0, 1.0), 0.0), Err(Error::AxisCase(_))));
    assert!(matches!(ray_limit_predictor(&egg(4.0, 1.0, 1.0), f64::INFINITY), Err(Error::AxisCase(_))));
}

#[test]
fn ball_report_is_bounded() {
    let r = boundedness_report(&egg(2.0, 1.0, 1.0), 64, &[1.0], &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::BoundedConsistent);
    assert!((r.grid_sup - 1.0).abs() < 1e-6);
    assert!(boundedness_report(&egg(2.0, 1.0, 1.0), 8, &[1.0], &cfg()).is_err());
}

#[test]
fn egg4_rays_match_predictor() {
    let r = boundedness_report(&egg(4.0, 1.0, 1.0), 128, &[0.25, 1.0, 4.0], &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::BoundedConsistent);
    for ray in &r.rays {
        assert!(ray.rel_diff.unwrap() < 0.01, "{ray:?}");
    }
}

#[test]
fn example_profile_is_bounded() {
    let r = boundedness_report(&example(), 64, &[0.25, 1.0, 4.0], &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::BoundedConsistent, "{}", r.evidence);
}

#[test]
fn axis_probes() {
    let ball = axis_limit_probe(&egg(2.0, 1.0, 1.0), 0, 200, &cfg()).unwrap();
    assert!(ball.converged);
    assert!((ball.extrapolated_limit - 1.0).abs() < 1e-10);

    // No closed form; the limit must be stable as the sequence lengthens.
    let weighted = egg(2.0, 4.0, 1.0);
    let a = axis_limit_probe(&weighted, 1, 200, &cfg()).unwrap();
    let b = axis_limit_probe(&weighted, 1, 400, &cfg()).unwrap();
    assert!(a.converged && b.converged);
    assert!((a.extrapolated_limit - b.extrapolated_limit).abs() < 1e-6);

    let ex = axis_limit_probe(&example(), 0, 400, &cfg()).unwrap();
    assert!(ex.converged);
}

#[test]
fn axis_probe_requires_continuous_extension() {
    let blow_up = domain_from_exponent(&ExponentProfile::expression("2+1/s", 1.0, 1.0).unwrap(), &cfg()).unwrap();
    assert!(matches!(axis_limit_probe(&blow_up, 0, 64, &cfg()), Err(Error::HypothesisNotMet(_))));
}

#[test]
fn grids_on_a_domain_and_its_dual_agree() {
    for g in [example(), numeric_egg(3.0)] {
        let d = dual_complement(&g);
        let a = leray_norm_grid(&g, 30, 30, &cfg()).unwrap();
        let b = leray_norm_grid(&d, 30, 30, &cfg()).unwrap();
        for (x, y) in a.log_norm_sq.iter().zip(&b.log_norm_sq) {
            assert!((x.exp() / y.exp() - 1.0).abs() < 1e-8);
        }
    }
}

#[test]
fn diagonal_rays_approach_the_limit() {
    for p in [1.5, 2.0, 3.0, 4.0] {
        let g = egg(p, 1.0, 1.0);
        let target = p / (2.0 * (p - 1.0f64).sqrt());
        let errs: Vec<f64> =
            [50, 100, 200].iter().map(|&m| (log_leray_norm_sq(&g, m, m, &cfg()).unwrap().log_norm_sq.exp() / target - 1.0).abs()).collect();
        assert!(errs[1] <= errs[0] + 1e-12 && errs[2] <= errs[1] + 1e-12);
        assert!(errs[2] < 0.02);
    }
}

#[test]
fn steep_exponent_grows_without_bound() {
    let s: Vec<f64> = (0..=200).map(|i| i as f64 / 200.0).collect();
    let p: Vec<f64> = s.iter().map(|s| (2.0 + 10.0 / (1.0 - s)).min(1e8)).collect();
    let g = domain_from_exponent(&ExponentProfile::tabulated(&s, &p, 1.0, 1.0).unwrap(), &cfg()).unwrap();
    let r = boundedness_report(&g, 64, &[], &cfg()).unwrap();
    let sups: Vec<f64> = r.sup_by_degree.iter().map(|x| x.1).collect();
    assert!(sups.windows(2).all(|w| w[1] > w[0]));
    assert_eq!(r.verdict, Verdict::UnboundedConsistent, "{}", r.evidence);
}

#[test]
fn grid_is_deterministic() {
    let g = example();
    let a = leray_norm_grid(&g, 12, 9, &cfg()).unwrap();
    let b = leray_norm_grid(&g, 12, 9, &cfg()).unwrap();
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn egg_moments_match_beta(p in 1.2f64..6.0, m1 in 0u32..60, m2 in 0u32..60) {
        let g = numeric_egg(p);
        let q = log_moment(&g, m1 as f64, m2 as f64, MomentKind::Primal, &cfg()).unwrap();
        let exact = reinhardt::numerics::log_beta(2.0 * m1 as f64 / p + 1.0, 2.0 * m2 as f64 / p + 1.0).unwrap();
        prop_assert!((q.log_value - exact).abs() < 1e-9);
    }
}
