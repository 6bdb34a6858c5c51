use hurwitz_core::realization::{general_realization, minimal_realization, quasicox_degenerate, unique_realization};
use hurwitz_core::{ArrangementMatrix, ExactNumber, Matrix};
use proptest::prelude::*;

fn arrangement() -> impl Strategy<Value = ArrangementMatrix> {
    (2usize..=5).prop_flat_map(|n| {
        prop::collection::vec(-2i64..=2, n * (n - 1) / 2).prop_map(move |upper| {
            let mut it = upper.into_iter();
            ArrangementMatrix::from_upper(n, |_, _| ExactNumber::from_int(it.next().unwrap()))
        })
    })
}

/// Rank-one matrices v vᵀ with v_i² = 2, which are maximally degenerate.
fn rank_one() -> impl Strategy<Value = ArrangementMatrix> {
    (2usize..=5, any::<u8>()).prop_map(|(n, signs)| {
        let s = |i: usize| if signs >> i & 1 == 1 { -2 } else { 2 };
        ArrangementMatrix::from_upper(n, |i, j| ExactNumber::from_int(s(i) * s(j) / 2))
    })
}

fn check_minimal(b: &ArrangementMatrix) -> Result<(), TestCaseError> {
    let real = minimal_realization(b).unwrap();
    real.check(b).unwrap();
    prop_assert_eq!(real.dim(), b.rank());
    prop_assert_eq!(real.gram(), b.to_matrix());
    prop_assert!(real.is_minimal());
    for r in real.reflections() {
        prop_assert!((&r * &r).is_identity());
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn minimal_realization_recovers_gram(b in arrangement()) {
        check_minimal(&b)?;
    }

    #[test]
    fn minimal_realization_of_rank_one(b in rank_one()) {
        prop_assert_eq!(b.rank(), 1);
        check_minimal(&b)?;
    }

    #[test]
    fn unique_realization_preserves_form(b in arrangement()) {
        prop_assume!(!b.det().is_zero());
        let real = unique_realization(&b).unwrap();
        let form = b.to_matrix();
        for r in real.reflections() {
            prop_assert_eq!(&(&r.transpose() * &form) * &r, form.clone());
        }
        prop_assert_eq!(quasicox_degenerate(&b, &real).unwrap(), real.product());
    }

    #[test]
    fn general_realization_of_twos(n in 3usize..=5, constants in prop::collection::vec(-4i64..=4, 2 * 5)) {
        let b = ArrangementMatrix::from_upper(n, |_, _| ExactNumber::from_int(2));
        let needed = 2 * (n - 2);
        let consts: Vec<ExactNumber> = constants.iter().take(needed).map(|&c| ExactNumber::from_int(c)).collect();
        let real = general_realization(&b, &[0, 1], &[0, 1], &consts).unwrap();
        real.check(&b).unwrap();
        prop_assert_eq!(real.gram(), b.to_matrix());
        let q = quasicox_degenerate(&b, &real).unwrap();
        prop_assert_eq!(q, real.product());
    }
}

#[test]
fn product_of_reflections_is_ordered_left_to_right() {
    let b = ArrangementMatrix::from_ints(&[&[2, -1], &[-1, 2]]).unwrap();
    let real = unique_realization(&b).unwrap();
    let rs = real.reflections();
    assert_eq!(real.product(), &rs[0] * &rs[1]);
    assert_eq!(real.product().pow(3), Matrix::identity(2));
}
