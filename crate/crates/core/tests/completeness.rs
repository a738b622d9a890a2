use curvlab::completeness::{
    ray_length, ray_length_profile, yamabe_test_integral, RayVerdict, TAIL_MARGIN,
};
use curvlab::field::Field;
use proptest::prelude::*;

#[test]
fn analytic_examples() {
    let one = ray_length_profile(|_| 1.0, 4, 3.0, 1e5).unwrap();
    assert!((one.integral / (1e5 - 3.0) - 1.0).abs() < 1e-12);
    assert_eq!(one.verdict, RayVerdict::Divergent);

    // n = 3: u^(2/(n-1)) = u, so t^-2 integrates to 1/t0
    let u = Field::parse("t^(-2)", 3).unwrap();
    let r = ray_length(&u, &[0.4, 1.0, 2.0], 3, 3.0, 1e4).unwrap();
    assert_eq!(r.verdict, RayVerdict::Finite);
    assert!((r.completed().unwrap() - 1.0 / 3.0).abs() < 1e-10);

    let inv = ray_length_profile(|t| 1.0 / t, 3, 3.0, 1e6).unwrap();
    assert_eq!(inv.verdict, RayVerdict::Undetermined);
    assert!((inv.tail_exponent + 1.0).abs() < TAIL_MARGIN);
    assert!((inv.integral - (1e6f64 / 3.0).ln()).abs() < 1e-9);
}

#[test]
fn base_point_selects_the_ray() {
    let u = Field::parse("t^(-1-x1)", 3).unwrap();
    let slow = ray_length(&u, &[0.0, 0.0, 0.0], 3, 3.0, 1e4).unwrap();
    let fast = ray_length(&u, &[1.0, 0.0, 0.0], 3, 3.0, 1e4).unwrap();
    assert_eq!(slow.verdict, RayVerdict::Undetermined);
    assert_eq!(fast.verdict, RayVerdict::Finite);
    assert!(ray_length(&u, &[0.0; 4], 3, 3.0, 10.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ray_length_monotone_in_end_time(p in -3.0f64..1.0, n in 3usize..=8, t1 in 10.0f64..1e3, grow in 1.01f64..50.0) {
        let u = move |t: f64| t.powf(p) * (2.0 + (0.3 * t).sin());
        let a = ray_length_profile(u, n, 3.0, t1).unwrap();
        let b = ray_length_profile(u, n, 3.0, t1 * grow).unwrap();
        prop_assert!(b.integral > a.integral);
    }

    #[test]
    fn ray_length_monotone_in_factor(p in -3.0f64..1.0, n in 3usize..=8, scale in 0.05f64..0.99) {
        let u = move |t: f64| t.powf(p) * (2.0 + t.cos());
        let big = ray_length_profile(u, n, 3.0, 1e3).unwrap();
        let small = ray_length_profile(move |t| scale * u(t), n, 3.0, 1e3).unwrap();
        prop_assert!(small.integral < big.integral);
        let expected = scale.powf(2.0 / (n as f64 - 1.0)) * big.integral;
        prop_assert!((small.integral - expected).abs() <= 1e-12 * big.integral);
    }

    #[test]
    fn power_law_tail_classification(q in -4.0f64..2.0, n in 3usize..=8) {
        // u = t^q gives integrand exponent 2q/(n-1)
        let p = 2.0 * q / (n as f64 - 1.0);
        let r = ray_length_profile(move |t| t.powf(q), n, 3.0, 1e4).unwrap();
        prop_assert!((r.tail_exponent - p).abs() < 1e-9);
        let expected = if p < -1.0 - TAIL_MARGIN {
            RayVerdict::Finite
        } else if p >= -1.0 + TAIL_MARGIN {
            RayVerdict::Divergent
        } else {
            RayVerdict::Undetermined
        };
        prop_assert_eq!(r.verdict, expected);
        if let Some(total) = r.completed() {
            let exact = 3.0f64.powf(p + 1.0) / (-p - 1.0);
            prop_assert!((total / exact - 1.0).abs() < 1e-8, "{total} vs {exact}");
        }
    }

    #[test]
    fn yamabe_integral_decreases_in_b(r_end in -10.0f64..-0.01, n in 2usize..=10, c_o in 0.0f64..3.0, b in 2.1f64..100.0, db in 0.01f64..10.0) {
        let a = yamabe_test_integral(r_end, n, b, c_o, 2.0).unwrap();
        let c = yamabe_test_integral(r_end, n, b + db, c_o, 2.0).unwrap();
        prop_assert!(c.value < a.value);
        prop_assert_eq!(a.threshold, c.threshold);
        // beyond the threshold the integral is negative
        let past = yamabe_test_integral(r_end, n, a.threshold + 1e-6, c_o, 2.0).unwrap();
        prop_assert!(past.value < 0.0);
        prop_assert!((a.value - (a.gradient_term + a.plateau_term + a.ramp_term)).abs() <= 1e-12 * a.value.abs().max(1.0));
    }
}

#[test]
fn yamabe_rejects_invalid_inputs() {
    assert!(yamabe_test_integral(1.0, 3, 9.0, 1.0, 1.0).is_err());
    assert!(yamabe_test_integral(-1.0, 3, 2.0, 1.0, 1.0).is_err());
    assert!(yamabe_test_integral(-1.0, 3, 9.0, -1.0, 1.0).is_err());
    assert!(yamabe_test_integral(-1.0, 3, 9.0, 1.0, 0.0).is_err());
}
