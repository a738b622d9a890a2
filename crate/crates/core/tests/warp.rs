use curvlab::sampling::probe_grid;
use curvlab::warp::{
    cone_log_curvature, ode_terms, parse_profile, power_law_curvature, substitute_u,
    warped_scalar_curvature, BaseGeometry, CurvatureProfile, WarpProfile,
};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn golden_closed_forms() {
    let sphere_like = BaseGeometry::abstract_constant(3, 6.0, 1.0).unwrap();
    let flat = BaseGeometry::abstract_constant(3, 0.0, 1.0).unwrap();
    let cone = parse_profile("t").unwrap();
    let hyp = parse_profile("exp(t)").unwrap();
    for t in probe_grid(0.0) {
        assert!(
            warped_scalar_curvature(&cone, &sphere_like, t)
                .unwrap()
                .abs()
                < 1e-12
        );
        assert!(
            rel(
                warped_scalar_curvature(&hyp, &flat, t.min(300.0)).unwrap(),
                -12.0
            ) < 1e-10
        );
    }
}

#[test]
fn cone_log_value_at_e() {
    // f = t ln t, R(g) = -6: at t = e, f = e, f' = 2, f'' = 1/e, so
    // R = (-6 - 6 - 24) / e^2
    let e = std::f64::consts::E;
    let expected = -36.0 / (e * e);
    let base = BaseGeometry::abstract_constant(3, -6.0, 1.0).unwrap();
    let f = parse_profile("t*ln(t)").unwrap();
    assert!(rel(warped_scalar_curvature(&f, &base, e).unwrap(), expected) < 1e-12);
    assert!(rel(cone_log_curvature(3, e), expected) < 1e-12);
}

#[test]
fn sphere_base_curvature_and_volume() {
    let s = BaseGeometry::sphere(3, 2.0).unwrap();
    assert!((s.scalar_curvature() - 1.5).abs() < 1e-15);
    assert!(rel(s.volume(), 2.0 * std::f64::consts::PI.powi(2) * 8.0) < 1e-14);
}

#[test]
fn profile_domain_is_enforced() {
    let f = parse_profile("t*ln(t)").unwrap();
    let base = BaseGeometry::abstract_constant(3, -6.0, 1.0).unwrap();
    assert!(warped_scalar_curvature(&f, &base, 0.5).is_err());
    assert!(CurvatureProfile::sample(&f, &base, vec![0.5, 2.0]).is_err());
}

/// Positive smooth profiles `A t^p (B + sin(w t)) (1 + C ln(1 + t))`.
fn profile_strategy() -> impl Strategy<Value = String> {
    (
        0.2f64..5.0,
        -1.5f64..2.5,
        1.2f64..4.0,
        0.1f64..3.0,
        0.0f64..2.0,
    )
        .prop_map(|(a, p, b, w, c)| format!("{a}*t^({p})*({b}+sin({w}*t))*(1+{c}*ln(1+t))"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn substituted_equation_vanishes(src in profile_strategy(), n in 3usize..=8, rg in -30.0f64..30.0) {
        let f = parse_profile(&src).unwrap();
        let base = BaseGeometry::abstract_constant(n, rg, 1.0).unwrap();
        let u = substitute_u(&f, n).unwrap();
        let grid = curvlab::sampling::log_space(0.5, 1e3, 64).unwrap();
        for t in grid {
            let terms = ode_terms(&u, |s| warped_scalar_curvature(&f, &base, s).unwrap(), &base, t).unwrap();
            prop_assert!(terms.residual().abs() <= 1e-8 * terms.scale(), "{src} n={n} t={t}: {terms:?}");
        }
    }

    #[test]
    fn conic_scaling(lambda in 1e-3f64..1e3, rg in -50.0f64..50.0, n in 2usize..=8) {
        let base = BaseGeometry::abstract_constant(n, rg, 1.0).unwrap();
        let f = WarpProfile::constant(lambda);
        for t in [1.0, 10.0, 1e3] {
            let r = warped_scalar_curvature(&f, &base, t).unwrap();
            prop_assert_eq!(r, rg / (lambda * lambda));
        }
    }

    #[test]
    fn symbolic_derivatives_match_richardson(src in profile_strategy(), t in 0.5f64..50.0) {
        let f = parse_profile(&src).unwrap();
        let j = f.jet(t).unwrap();
        let v = |s: f64| f.value(s).unwrap();
        let d1 = |h: f64| (v(t + h) - v(t - h)) / (2.0 * h);
        let d2 = |h: f64| (v(t + h) - 2.0 * v(t) + v(t - h)) / (h * h);
        let h = 1e-2 * t.min(1.0);
        let r1 = (4.0 * d1(h / 2.0) - d1(h)) / 3.0;
        let r2 = (4.0 * d2(h / 2.0) - d2(h)) / 3.0;
        let scale = j.value.abs() + j.d1.abs() + j.d2.abs();
        prop_assert!((r1 - j.d1).abs() <= 1e-6 * scale, "{src}: {r1} vs {}", j.d1);
        prop_assert!((r2 - j.d2).abs() <= 1e-4 * scale, "{src}: {r2} vs {}", j.d2);
    }

    #[test]
    fn power_law_symmetry(alpha in -3.0f64..4.0, n in 2usize..=10, t in 0.1f64..1e4) {
        let a = power_law_curvature(alpha, n, t);
        let b = power_law_curvature(1.0 - alpha, n, t);
        prop_assert!((a - b).abs() <= 1e-14 * a.abs().max(1e-300));
    }

    #[test]
    fn power_law_matches_generic_formula(alpha in 0.1f64..3.0, n in 3usize..=8, t in 1.0f64..100.0) {
        // u = t^alpha is f = t^(2 alpha/(n+1)) over a flat base
        let beta = 2.0 * alpha / (n as f64 + 1.0);
        let f = parse_profile(&format!("t^({beta})")).unwrap();
        let flat = BaseGeometry::abstract_constant(n, 0.0, 1.0).unwrap();
        let r = warped_scalar_curvature(&f, &flat, t).unwrap();
        let expected = power_law_curvature(alpha, n, t);
        prop_assert!((r - expected).abs() <= 1e-10 * expected.abs().max(1.0 / (t * t)));
    }
}
