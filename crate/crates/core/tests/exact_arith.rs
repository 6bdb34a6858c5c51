use hurwitz_core::exact_number::{ratio, ExactNumber};
use proptest::prelude::*;

fn element() -> impl Strategy<Value = ExactNumber> {
    (prop::sample::select(vec![1u64, 3, 4, 5, 7, 8, 12, 15]), -6i64..6, -3i64..=3, 1i64..=4).prop_map(|(q, p, a, d)| {
        &ExactNumber::two_cos(p, q) + &ExactNumber::from_rational(ratio(a, d))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn two_cos_symmetries(p in -40i64..40, q in 1u64..20) {
        let x = ExactNumber::two_cos(p, q);
        let m = 2 * q as i64;
        prop_assert_eq!(&x, &ExactNumber::two_cos(p.rem_euclid(m), q));
        prop_assert_eq!(&x, &ExactNumber::two_cos(m - p, q));
        prop_assert_eq!(ExactNumber::two_cos(q as i64 - p, q), -&x);
    }

    #[test]
    fn field_axioms_mixed_conductors(a in element(), b in element(), c in element()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        if !b.is_zero() {
            prop_assert_eq!(&a.div(&b).unwrap() * &b, a.clone());
        }
    }

    #[test]
    fn approx_matches_float(p in -30i64..30, q in 1u64..25, digits in 3u32..12) {
        let x = ExactNumber::two_cos(p, q);
        let float = 2.0 * (std::f64::consts::PI * p as f64 / q as f64).cos();
        let shown: f64 = x.approx(digits).unwrap().parse().unwrap();
        prop_assert!((shown - float).abs() <= 10f64.powi(1 - digits as i32), "{} vs {}", shown, float);
    }

    #[test]
    fn promotion_then_reduction(x in element(), k in 1u64..5) {
        let m = x.conductor() * k;
        let promoted = ExactNumber::from_coeffs(m, x.coeffs_at(m));
        prop_assert_eq!(promoted, x);
    }
}
