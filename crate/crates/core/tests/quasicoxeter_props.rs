use hurwitz_core::arrangement::SignVector;
use hurwitz_core::catalog::{representatives, universal_matrix, CoxeterType};
use hurwitz_core::quasicoxeter::{charpoly, cox_fingerprint, cox_matrix, cyclo_fingerprint, element_order};
use hurwitz_core::{ArrangementMatrix, ExactNumber};
use proptest::prelude::*;

fn arrangement() -> impl Strategy<Value = ArrangementMatrix> {
    (2usize..=5).prop_flat_map(|n| {
        prop::collection::vec(-2i64..=2, n * (n - 1) / 2).prop_map(move |upper| {
            let mut it = upper.into_iter();
            ArrangementMatrix::from_upper(n, |_, _| ExactNumber::from_int(it.next().unwrap()))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn charpoly_invariant_under_sign_conjugation(b in arrangement(), mask in 0u64..32) {
        let signed = b.sign_conjugate(&SignVector::from_mask(b.n(), mask));
        prop_assert_eq!(charpoly(&cox_matrix(&signed)).unwrap(), charpoly(&cox_matrix(&b)).unwrap());
    }

    #[test]
    fn fingerprint_reassembles_charpoly(b in arrangement()) {
        let p = charpoly(&cox_matrix(&b)).unwrap();
        prop_assert_eq!(cyclo_fingerprint(&p).unwrap().product(), p);
    }
}

#[test]
fn element_order_matches_implied_order() {
    let kinds = [
        CoxeterType::A(4),
        CoxeterType::B(4),
        CoxeterType::D(5),
        CoxeterType::F4,
        CoxeterType::H3,
        CoxeterType::H4,
        CoxeterType::E6,
        CoxeterType::I2(7),
    ];
    for kind in kinds {
        let mut mats = vec![universal_matrix(kind).unwrap()];
        mats.extend(representatives(kind).unwrap().into_iter().map(|r| r.matrix));
        for b in mats {
            let implied = cox_fingerprint(&b).unwrap().implied_order().expect("finite type");
            assert_eq!(element_order(&cox_matrix(&b), 200), Some(implied), "{kind}");
        }
    }
}
