use hurwitz_core::arrangement::SignVector;
use hurwitz_core::braid_action::{act_sigma, act_word, hurwitz, k_matrix, reorder_tree, stokes_act, stokes_to_arrangement};
use hurwitz_core::matrix::cofactor_det;
use hurwitz_core::perm_models::SignedPermutation;
use hurwitz_core::{ArrangementMatrix, BraidWord, ExactNumber, Letter, Matrix, Permutation};
use proptest::prelude::*;

fn entry_in(conductors: Vec<u64>) -> impl Strategy<Value = ExactNumber> {
    prop_oneof![
        (-3i64..=3).prop_map(ExactNumber::from_int),
        (1i64..5, prop::sample::select(conductors)).prop_map(|(p, q)| ExactNumber::two_cos(p, q)),
    ]
}

fn entry() -> impl Strategy<Value = ExactNumber> {
    entry_in(vec![5, 8])
}

/// Entries in Q(√5) only, so that determinants stay cheap.
fn arrangement_q5(min: usize, max: usize) -> impl Strategy<Value = ArrangementMatrix> {
    (min..=max).prop_flat_map(|n| {
        prop::collection::vec(entry_in(vec![5]), n * (n - 1) / 2).prop_map(move |upper| {
            let mut it = upper.into_iter();
            ArrangementMatrix::from_upper(n, |_, _| it.next().unwrap())
        })
    })
}

fn arrangement(min: usize, max: usize) -> impl Strategy<Value = ArrangementMatrix> {
    (min..=max).prop_flat_map(|n| {
        prop::collection::vec(entry(), n * (n - 1) / 2).prop_map(move |upper| {
            let mut it = upper.into_iter();
            ArrangementMatrix::from_upper(n, |_, _| it.next().unwrap())
        })
    })
}

fn unitriangular(n: usize, upper: Vec<ExactNumber>) -> Matrix {
    let mut it = upper.into_iter();
    Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => ExactNumber::one(),
        std::cmp::Ordering::Less => it.next().unwrap(),
        std::cmp::Ordering::Greater => ExactNumber::zero(),
    })
}

fn word(n: usize) -> impl Strategy<Value = BraidWord> {
    prop::collection::vec((1..n, prop::bool::ANY), 0..10)
        .prop_map(|ls| BraidWord::new(ls.into_iter().map(|(i, inv)| Letter::new(i, if inv { -1 } else { 1 }).unwrap()).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn braid_relations_on_matrices(b in arrangement(3, 6), seed in 0usize..100) {
        let n = b.n();
        let i = 1 + seed % (n - 2);
        let lhs = act_sigma(&act_sigma(&act_sigma(&b, i, 1).unwrap(), i + 1, 1).unwrap(), i, 1).unwrap();
        let rhs = act_sigma(&act_sigma(&act_sigma(&b, i + 1, 1).unwrap(), i, 1).unwrap(), i + 1, 1).unwrap();
        prop_assert_eq!(lhs, rhs);
        for j in 1..n {
            if j.abs_diff(i) >= 2 {
                let a = act_sigma(&act_sigma(&b, i, 1).unwrap(), j, 1).unwrap();
                let c = act_sigma(&act_sigma(&b, j, 1).unwrap(), i, 1).unwrap();
                prop_assert_eq!(a, c);
            }
        }
        prop_assert_eq!(act_sigma(&act_sigma(&b, i, 1).unwrap(), i, -1).unwrap(), b);
    }

    #[test]
    fn action_is_a_congruence(b in arrangement_q5(2, 5), seed in 0usize..100) {
        let i = 1 + seed % (b.n() - 1);
        let k = k_matrix(&b, i).unwrap();
        let moved = act_sigma(&b, i, 1).unwrap();
        prop_assert_eq!(&(&k * &b.to_matrix()) * &k, moved.to_matrix());
        prop_assert_eq!(moved.det(), b.det());
        prop_assert_eq!(moved.rank(), b.rank());
    }

    #[test]
    fn words_preserve_det_and_rank(b in arrangement_q5(2, 4), w in word(5)) {
        prop_assume!(w.max_index() < b.n());
        let moved = act_word(&b, &w).unwrap();
        prop_assert_eq!(moved.det(), cofactor_det(&b.to_matrix()));
        prop_assert_eq!(moved.rank(), b.rank());
        prop_assert_eq!(act_word(&moved, &w.inverse()).unwrap(), b);
    }

    #[test]
    fn action_descends_to_sign_classes(b in arrangement(2, 5), mask in 0u64..32, w in word(5)) {
        prop_assume!(w.max_index() < b.n());
        let signed = b.sign_conjugate(&SignVector::from_mask(b.n(), mask));
        let x = act_word(&b, &w).unwrap();
        let y = act_word(&signed, &w).unwrap();
        prop_assert!(x.is_sign_equivalent(&y));
    }

    #[test]
    fn stokes_action_matches_symmetrization(n in 2usize..6, upper in prop::collection::vec(entry(), 10), seed in 0usize..100, inv in prop::bool::ANY) {
        let s = unitriangular(n, upper);
        let i = 1 + seed % (n - 1);
        let e = if inv { -1 } else { 1 };
        let moved = stokes_act(&s, i, e).unwrap();
        prop_assert_eq!(stokes_to_arrangement(&moved).unwrap(), act_sigma(&stokes_to_arrangement(&s).unwrap(), i, e).unwrap());
    }

    #[test]
    fn hurwitz_on_signed_permutations(seed in prop::collection::vec((0usize..5, 0usize..5, prop::bool::ANY), 4)) {
        let t: Vec<SignedPermutation> = seed
            .iter()
            .map(|&(a, b, flip)| if a == b { SignedPermutation::sign_change(5, a) } else { SignedPermutation::transposition(5, a, b, flip) })
            .collect();
        let lhs = hurwitz(&hurwitz(&hurwitz(&t, 1, 1).unwrap(), 2, 1).unwrap(), 1, 1).unwrap();
        let rhs = hurwitz(&hurwitz(&hurwitz(&t, 2, 1).unwrap(), 1, 1).unwrap(), 2, 1).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        let far_a = hurwitz(&hurwitz(&t, 1, 1).unwrap(), 3, -1).unwrap();
        let far_b = hurwitz(&hurwitz(&t, 3, -1).unwrap(), 1, 1).unwrap();
        prop_assert_eq!(&far_a, &far_b);
        let product = |v: &[SignedPermutation]| v.iter().skip(1).fold(v[0].clone(), |acc, g| acc.compose(g));
        prop_assert_eq!(product(&lhs), product(&t));
    }

    #[test]
    fn hurwitz_on_permutations(seed in prop::collection::vec((0usize..6, 1usize..6), 5), w in word(5)) {
        let t: Vec<Permutation> = seed.iter().map(|&(a, d)| Permutation::transposition(6, a, (a + d) % 6)).collect();
        let moved = hurwitz_core::braid_action::hurwitz_word(&t, &w).unwrap();
        let product = |v: &[Permutation]| v.iter().skip(1).fold(v[0].clone(), |acc, g| acc.compose(g));
        prop_assert_eq!(product(&moved), product(&t));
        prop_assert_eq!(hurwitz_core::braid_action::hurwitz_word(&moved, &w.inverse()).unwrap(), t);
    }
}

/// Labeled trees on n vertices, decoded from every Prüfer sequence.
fn trees(n: usize) -> Vec<Vec<(usize, usize)>> {
    if n == 1 {
        return vec![vec![]];
    }
    let total = n.pow(n as u32 - 2);
    (0..total)
        .map(|mut code| {
            let seq: Vec<usize> = (0..n - 2)
                .map(|_| {
                    let v = code % n;
                    code /= n;
                    v
                })
                .collect();
            let mut degree = vec![1; n];
            for &v in &seq {
                degree[v] += 1;
            }
            let mut edges = Vec::new();
            for &v in &seq {
                let leaf = (0..n).find(|&u| degree[u] == 1).unwrap();
                edges.push((leaf, v));
                degree[leaf] -= 1;
                degree[v] -= 1;
            }
            let rest: Vec<usize> = (0..n).filter(|&u| degree[u] == 1).collect();
            edges.push((rest[0], rest[1]));
            edges
        })
        .collect()
}

#[test]
fn reorder_tree_reaches_every_target() {
    let labels = [ExactNumber::one(), ExactNumber::from_int(-2), ExactNumber::two_cos(1, 5), ExactNumber::from_int(3)];
    let mut checked = 0;
    for n in 1..=5 {
        let targets = Permutation::all(n);
        for (t, edges) in trees(n).iter().enumerate() {
            let mut upper = vec![vec![ExactNumber::zero(); n]; n];
            for (k, &(a, b)) in edges.iter().enumerate() {
                upper[a.min(b)][a.max(b)] = labels[(k + t) % labels.len()].clone();
            }
            let b = ArrangementMatrix::from_upper(n, |i, j| upper[i][j].clone());
            assert!(b.is_tree());
            for target in &targets {
                let order: Vec<usize> = target.images().iter().map(|&x| x as usize).collect();
                let w = reorder_tree(&b, &order).unwrap_or_else(|e| panic!("{edges:?} to {order:?}: {e}"));
                assert!(act_word(&b, &w).unwrap().is_sign_equivalent(&b.permuted(&order)));
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 1 + 2 + 3 * 6 + 16 * 24 + 125 * 120);
}

#[test]
fn reorder_tree_rejects_cycles() {
    let b = ArrangementMatrix::from_ints(&[&[2, 1, 1], &[1, 2, 1], &[1, 1, 2]]).unwrap();
    assert!(reorder_tree(&b, &[1, 0, 2]).is_err());
}
