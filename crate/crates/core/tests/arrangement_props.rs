use hurwitz_core::arrangement::{EdgeLabel, SignVector};
use hurwitz_core::matrix::cofactor_det;
use hurwitz_core::{ArrangementMatrix, ExactNumber};
use proptest::prelude::*;

fn entry_in(conductors: Vec<u64>) -> impl Strategy<Value = ExactNumber> {
    prop_oneof![
        3 => Just(ExactNumber::zero()),
        2 => (-3i64..=3).prop_map(ExactNumber::from_int),
        2 => (1i64..12, prop::sample::select(conductors)).prop_map(|(p, q)| ExactNumber::two_cos(p, q)),
    ]
}

fn entry() -> impl Strategy<Value = ExactNumber> {
    entry_in(vec![5, 7, 12])
}

fn nonzero_entry() -> impl Strategy<Value = ExactNumber> {
    entry().prop_filter("nonzero", |e| !e.is_zero())
}

fn arrangement() -> impl Strategy<Value = ArrangementMatrix> {
    arrangement_over(vec![5, 7, 12])
}

fn arrangement_over(conductors: Vec<u64>) -> impl Strategy<Value = ArrangementMatrix> {
    (1usize..=5).prop_flat_map(move |n| {
        prop::collection::vec(entry_in(conductors.clone()), n * (n - 1) / 2).prop_map(move |upper| {
            let mut it = upper.into_iter();
            ArrangementMatrix::from_upper(n, |_, _| it.next().unwrap())
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn sign_canonical_is_a_class_function(b in arrangement()) {
        let canon = b.sign_canonical();
        prop_assert_eq!(canon.sign_canonical(), canon.clone());
        for mask in 0..1u64 << b.n() {
            let signed = b.sign_conjugate(&SignVector::from_mask(b.n(), mask));
            prop_assert_eq!(signed.sign_canonical(), canon.clone());
            prop_assert!(signed.is_sign_equivalent(&b));
        }
    }

    #[test]
    fn canonical_signs_produce_the_canonical_form(b in arrangement()) {
        prop_assert_eq!(b.sign_conjugate(&b.canonical_signs()), b.sign_canonical());
    }

    #[test]
    fn tree_edges_all_take_the_preferred_sign(b in arrangement()) {
        prop_assume!(b.is_tree());
        let canon = b.sign_canonical();
        for i in 0..b.n() {
            for j in i + 1..b.n() {
                let e = canon.get(i, j);
                prop_assert!(*e <= -e, "{} at ({}, {})", e, i, j);
            }
        }
    }

    #[test]
    fn cycle_sign_product_is_invariant(n in 3usize..=6, labels in prop::collection::vec(nonzero_entry(), 6), mask in 0u64..64) {
        let mut upper = vec![vec![ExactNumber::zero(); n]; n];
        for k in 0..n {
            let (a, b) = (k, (k + 1) % n);
            upper[a.min(b)][a.max(b)] = labels[k].clone();
        }
        let b = ArrangementMatrix::from_upper(n, |i, j| upper[i][j].clone());
        let around = |m: &ArrangementMatrix| (0..n).fold(ExactNumber::one(), |acc, k| &acc * m.get(k, (k + 1) % n));
        let signed = b.sign_conjugate(&SignVector::from_mask(n, mask));
        prop_assert_eq!(around(&signed), around(&b));
    }

    #[test]
    fn det_and_rank_match_cofactor_expansion(b in arrangement_over(vec![5])) {
        let (det, rank) = b.det_rank();
        prop_assert_eq!(&det, &cofactor_det(&b.to_matrix()));
        prop_assert_eq!(rank == b.n(), !det.is_zero());
        prop_assert_eq!(rank, b.to_matrix().rank());
    }

    #[test]
    fn json_round_trip(b in arrangement()) {
        let text = b.to_json().to_string();
        prop_assert_eq!(ArrangementMatrix::from_json_str(&text).unwrap(), b);
    }

    #[test]
    fn graph_round_trip(b in arrangement()) {
        prop_assert_eq!(ArrangementMatrix::from_graph(&b.to_graph()).unwrap(), b);
    }

    #[test]
    fn edge_labels_round_trip(e in entry()) {
        let label = EdgeLabel::of(&e);
        prop_assert_eq!(label.value().unwrap(), e.clone());
        if matches!(label, EdgeLabel::Cos { .. }) {
            prop_assert_eq!(EdgeLabel::parse(&label.render()).unwrap().value().unwrap(), e);
        }
    }
}
