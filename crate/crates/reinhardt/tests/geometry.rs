use proptest::prelude::*;
use reinhardt::geometry::*;
use reinhardt::numerics::QuadConfig;
use reinhardt::Error;

const EXAMPLE: &str = "2+1/log(10/s)";

fn cfg() -> QuadConfig {
    QuadConfig::default()
}

fn example() -> DomainGeometry {
    domain_from_exponent(&ExponentProfile::expression(EXAMPLE, 1.0, 1.0).unwrap(), &cfg()).unwrap()
}

fn table_profile() -> ExponentProfile {
    let s: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
    let p: Vec<f64> = s.iter().map(|s| 1.5 + 2.0 * s * s + (6.0 * s).sin().abs()).collect();
    ExponentProfile::tabulated(&s, &p, 0.7, 1.3).unwrap()
}

/// Romberg integration: trapezoid sums halved until successive Richardson
/// tableaux agree.
fn romberg(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let mut rows: Vec<Vec<f64>> = vec![vec![0.5 * (b - a) * (f(a) + f(b))]];
    let mut n = 1usize;
    for level in 1..22 {
        let h = (b - a) / (2 * n) as f64;
        let mid: f64 = (0..n).map(|i| f(a + (2 * i + 1) as f64 * h)).sum();
        let mut row = vec![0.5 * rows[level - 1][0] + h * mid];
        for j in 1..=level {
            let prev = row[j - 1];
            let four = 4f64.powi(j as i32);
            row.push(prev + (prev - rows[level - 1][j - 1]) / (four - 1.0));
        }
        n *= 2;
        let (new, old) = (row[level], rows[level - 1][level - 1]);
        rows.push(row);
        if level > 5 && (new - old).abs() < 1e-14 * new.abs() {
            return new;
        }
    }
    rows.last().unwrap().last().copied().unwrap()
}

#[test]
fn egg_radii_in_closed_form() {
    let g = domain_from_exponent(&ExponentProfile::ball(), &cfg()).unwrap();
    assert!((g.r1(0.5) - 0.707_106_781_186_547_5).abs() < 1e-15);
    assert_eq!(g.r1(0.0), 0.0);
    assert_eq!(g.r2(0.0), 1.0);
}

#[test]
fn example_radius_against_romberg_oracle() {
    let g = example();
    let p = |t: f64| 2.0 + 1.0 / (10.0 / t).ln();
    let phi1 = romberg(|t| 1.0 / (t * p(t)), 0.5, 1.0);
    assert!((g.r1(0.5) / (-phi1).exp() - 1.0).abs() < 1e-8);
    // t = w^4 removes the logarithmic derivative singularity at 0.
    let phi2 = romberg(|w| if w == 0.0 { 0.0 } else { 4.0 * w.powi(3) / ((1.0 - w.powi(4)) * p(w.powi(4))) }, 0.0, 0.5f64.powf(0.25));
    assert!((g.r2(0.5) / (-phi2).exp() - 1.0).abs() < 1e-8);
}

#[test]
fn numeric_egg_matches_closed_form() {
    for (p, a1, a2) in [(4.0, 1.0, 1.0), (1.5, 2.0, 0.5), (3.0, 1.0, 4.0)] {
        let prof = ExponentProfile::egg(p, a1, a2).unwrap();
        let g = domain_from_exponent_numeric(&prof, &cfg()).unwrap();
        for &s in &[1e-200, 1e-30, 1e-6, 0.01, 0.2, 0.5, 0.77, 0.999, 1.0 - 1e-12] {
            let r1 = prof.b1 * f64::powf(s, 1.0 / p);
            let r2 = prof.b2 * f64::powf(1.0 - s, 1.0 / p);
            assert!((g.r1(s) / r1 - 1.0).abs() < 1e-10, "r1 p={p} s={s}");
            assert!((g.r2(s) / r2 - 1.0).abs() < 1e-10, "r2 p={p} s={s}");
        }
    }
}

#[test]
fn endpoint_values() {
    for g in [example(), domain_from_exponent(&table_profile(), &cfg()).unwrap()] {
        assert_eq!(g.r1(0.0), 0.0);
        assert_eq!(g.r2(1.0), 0.0);
        assert!((g.r1(1.0) - g.profile().b1).abs() < 1e-15);
        assert!((g.r2(0.0) - g.profile().b2).abs() < 1e-15);
        assert!((g.r1(1.0 - 1e-15) / g.profile().b1 - 1.0).abs() < 1e-14);
    }
}

#[test]
fn dual_examples() {
    let ball = domain_from_exponent(&ExponentProfile::ball(), &cfg()).unwrap();
    let d = dual_complement(&ball);
    assert_eq!(d.constant_exponent(), Some(2.0));
    assert_eq!((d.b1(), d.b2()), (1.0, 1.0));

    let egg4 = domain_from_exponent(&ExponentProfile::egg(4.0, 1.0, 1.0).unwrap(), &cfg()).unwrap();
    let d4 = dual_complement(&egg4);
    assert_eq!(d4.constant_exponent(), Some(4.0 / 3.0));
    assert_eq!((d4.b1(), d4.b2()), (1.0, 1.0));

    let de = dual_complement(&example());
    for s in [1e-9, 0.05, 0.5, 0.93] {
        let l = 1.0 / (10.0f64 / s).ln();
        let p = 2.0 + l;
        assert_eq!(de.p_check(s), p / (p - 1.0));
        assert!((de.p_check(s) - (2.0 + l) / (1.0 + l)).abs() < 1e-15);
    }
}

#[test]
fn dual_identities_and_involution() {
    for g in [example(), domain_from_exponent(&table_profile(), &cfg()).unwrap()] {
        let d = dual_complement(&g);
        let dd = dual_complement(&d);
        assert!((d.b1() * g.b1() - 1.0).abs() < 1e-15);
        for i in 0..256 {
            let s = (i as f64 + 0.5) / 256.0;
            assert!((g.r1_star(s) * g.r1(s) - s).abs() < 1e-15 * s.max(1e-300) * 4.0);
            assert!((g.r2_star(s) * g.r2(s) - (1.0 - s)).abs() < 1e-14);
            assert!((g.r1(s) - dd.r1(s)).abs() < 1e-9 * g.b1());
            assert!((g.r2(s) - dd.r2(s)).abs() < 1e-9 * g.b2());
            assert!((d.r1(s) - g.r1_star(s)).abs() < 1e-13 * d.r1(s));
            let pd = d.p_check(s);
            assert!((1.0 / g.p_check(s) + 1.0 / pd - 1.0).abs() < 1e-14);
        }
    }
}

/// Curvature of the plane curve `s ↦ (r1(s), r2(s))` from finite
/// differences with one Richardson step.
fn shadow_curvature(g: &DomainGeometry, s: f64) -> f64 {
    let k = |h: f64| {
        let (x0, y0) = (g.r1(s - h), g.r2(s - h));
        let (x1, y1) = (g.r1(s), g.r2(s));
        let (x2, y2) = (g.r1(s + h), g.r2(s + h));
        let (dx, dy) = ((x2 - x0) / (2.0 * h), (y2 - y0) / (2.0 * h));
        let (ddx, ddy) = ((x2 - 2.0 * x1 + x0) / (h * h), (y2 - 2.0 * y1 + y0) / (h * h));
        (dx * ddy - dy * ddx).abs() / (dx * dx + dy * dy).powf(1.5)
    };
    let h = 1e-3 * s.min(1.0 - s);
    (4.0 * k(h / 2.0) - k(h)) / 3.0
}

#[test]
fn curvature_examples() {
    let ball = domain_from_exponent(&ExponentProfile::ball(), &cfg()).unwrap();
    let c = curvatures_at(&ball, 0.5).unwrap();
    assert!((c.kappa_ratio * c.normal_factor - 1.0).abs() < 1e-14);
    assert!((c.recovered_exponent() - 2.0).abs() < 1e-14);

    let egg4 = domain_from_exponent_numeric(&ExponentProfile::egg(4.0, 1.0, 1.0).unwrap(), &cfg()).unwrap();
    assert!((curvatures_at(&egg4, 0.25).unwrap().recovered_exponent() - 4.0).abs() < 1e-8);
    assert!(matches!(curvatures_at(&egg4, 1.5), Err(Error::Domain(_))));
}

#[test]
fn third_curvature_is_shadow_curve_curvature() {
    let domains = [
        domain_from_exponent_numeric(&ExponentProfile::egg(3.0, 1.0, 2.0).unwrap(), &cfg()).unwrap(),
        example(),
        domain_from_exponent(&ExponentProfile::expression("3+s*s", 1.2, 0.8).unwrap(), &cfg()).unwrap(),
    ];
    for g in &domains {
        for &s in &[0.05, 0.3, 0.5, 0.71, 0.95] {
            let c = curvatures_at(g, s).unwrap();
            let oracle = shadow_curvature(g, s);
            assert!((c.kappa3 / oracle - 1.0).abs() < 1e-5, "{} at {s}: {} vs {oracle}", g.profile().label(), c.kappa3);
            assert!(c.kappa1 > 0.0 && c.kappa2 > 0.0 && c.kappa3 > 0.0);
        }
    }
}

#[test]
fn classification_examples() {
    let egg4 = domain_from_exponent(&ExponentProfile::egg(4.0, 1.0, 1.0).unwrap(), &cfg()).unwrap();
    let c = classify_boundary(&egg4);
    assert!(matches!(c.axis0, BoundaryType::FiniteType { order: 4, .. }));
    assert!(matches!(c.axis1, BoundaryType::FiniteType { order: 4, .. }));

    let egg3 = domain_from_exponent(&ExponentProfile::egg(3.0, 1.0, 1.0).unwrap(), &cfg()).unwrap();
    assert_eq!(classify_boundary(&egg3).axis0, BoundaryType::Inconclusive { raw_limit: Some(3.0) });

    match classify_boundary(&example()).axis0 {
        BoundaryType::FiniteType { order: 2, confidence } => assert!(confidence < 0.5, "confidence {confidence}"),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn example_membership() {
    let g = example();
    assert!(g.membership.in_r_tilde.value);
    assert!(g.membership.in_r_prime.value);
    assert!(!g.membership.in_r.value);
    let egg = domain_from_exponent(&ExponentProfile::egg(3.0, 1.0, 1.0).unwrap(), &cfg()).unwrap();
    assert!(egg.membership.in_r_prime.value && egg.membership.in_r.value, "{:?}", egg.membership);
}

#[test]
fn invalid_profiles_are_rejected() {
    let low = ExponentProfile::expression("0.5+s", 1.0, 1.0).unwrap();
    assert!(matches!(domain_from_exponent(&low, &cfg()), Err(Error::ExponentOutOfRange { .. })));
    let nan = ExponentProfile::expression("2+log(s-0.5)", 1.0, 1.0).unwrap();
    assert!(matches!(domain_from_exponent(&nan, &cfg()), Err(Error::NonEvaluableProfile { .. })));
    let flat = ExponentProfile::expression("1", 1.0, 1.0).unwrap();
    assert!(matches!(domain_from_exponent(&flat, &cfg()), Err(Error::ExponentOutOfRange { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn radii_are_monotone(a in 1e-6f64..1.0, b in 1e-6f64..1.0) {
        let g = example_shared();
        let (s, t) = if a < b { (a, b) } else { (b, a) };
        prop_assume!(t - s > 1e-12);
        prop_assert!(g.r1(s) < g.r1(t));
        prop_assert!(g.r2(s) > g.r2(t));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn recovered_exponent_matches_profile(s in 1e-4f64..(1.0 - 1e-4), which in 0usize..3) {
        let g = &three_domains()[which];
        let c = curvatures_at(g, s).unwrap();
        prop_assert!((c.recovered_exponent() - g.p_check(s)).abs() < 1e-6);
    }
}

fn example_shared() -> &'static DomainGeometry {
    static G: std::sync::OnceLock<DomainGeometry> = std::sync::OnceLock::new();
    G.get_or_init(example)
}

fn three_domains() -> &'static [DomainGeometry; 3] {
    static G: std::sync::OnceLock<[DomainGeometry; 3]> = std::sync::OnceLock::new();
    G.get_or_init(|| {
        [
            domain_from_exponent(&ExponentProfile::egg(4.0, 1.0, 1.0).unwrap(), &cfg()).unwrap(),
            example(),
            domain_from_exponent(&table_profile(), &cfg()).unwrap(),
        ]
    })
}

#[test]
fn support_constants_of_eggs() {
    let ball = domain_from_exponent(&ExponentProfile::ball(), &cfg()).unwrap();
    let k = support_constants(&ball);
    assert!((k.c_omega - 1.0).abs() < 1e-12 && (k.cap_c_omega - 1.0).abs() < 1e-12);
    // Dual exponent 3/2: |r*|² = s^{4/3} + (1-s)^{4/3}, smallest at s = 1/2.
    let egg3 = domain_from_exponent(&ExponentProfile::egg(3.0, 1.0, 1.0).unwrap(), &cfg()).unwrap();
    let k = support_constants(&egg3);
    assert!((k.c_omega - 2f64.powf(-1.0 / 6.0)).abs() < 1e-12);
    assert!((k.cap_c_omega - 1.0).abs() < 1e-12);
}
