use std::collections::{BTreeSet, HashSet};

use hurwitz_core::braid_action::hurwitz_word;
use hurwitz_core::catalog::CoxeterType;
use hurwitz_core::orbit_engine::{count_generating_orbits, hurwitz_orbit, CountMode};
use hurwitz_core::perm_models::{
    canonical_reduce_a, chain_vertices, dn_invariant, generates_dn, generates_full_symmetric, product_cycle_check,
    SignedPermutation,
};
use hurwitz_core::{BraidWord, Letter, Permutation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn transpositions(letters: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    for a in 0..letters {
        for b in a + 1..letters {
            out.push(Permutation::transposition(letters, a, b));
        }
    }
    out
}

/// Every n-tuple of transpositions on n+1 letters, as index vectors into `transpositions`.
fn all_tuples(count: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..count.pow(len as u32)).map(move |mut code| {
        (0..len)
            .map(|_| {
                let v = code % count;
                code /= count;
                v
            })
            .collect()
    })
}

fn generated_size(gens: &[Permutation]) -> usize {
    let n = gens[0].len();
    let mut seen = HashSet::from([Permutation::identity(n)]);
    let mut frontier = vec![Permutation::identity(n)];
    while let Some(g) = frontier.pop() {
        for s in gens {
            let h = g.compose(s);
            if seen.insert(h.clone()) {
                frontier.push(h);
            }
        }
    }
    seen.len()
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

#[test]
fn full_symmetric_test_matches_closure() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for letters in 3..=7 {
        let pool = transpositions(letters);
        let n = letters - 1;
        let tuples: Vec<Vec<usize>> = if letters <= 5 {
            all_tuples(pool.len(), n).collect()
        } else {
            (0..300).map(|_| (0..n).map(|_| rng.random_range(0..pool.len())).collect()).collect()
        };
        for idx in tuples {
            let t: Vec<Permutation> = idx.iter().map(|&i| pool[i].clone()).collect();
            let full = generated_size(&t) == factorial(letters);
            assert_eq!(generates_full_symmetric(&t).unwrap(), full, "{idx:?} on {letters} letters");
        }
    }
}

#[test]
fn generating_transpositions_multiply_to_a_long_cycle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for letters in 3..=6 {
        let pool = transpositions(letters);
        let n = letters - 1;
        let tuples: Vec<Vec<usize>> = if letters <= 5 {
            all_tuples(pool.len(), n).collect()
        } else {
            (0..50_000).map(|_| (0..n).map(|_| rng.random_range(0..pool.len())).collect()).collect()
        };
        for idx in tuples {
            let t: Vec<Permutation> = idx.iter().map(|&i| pool[i].clone()).collect();
            if generates_full_symmetric(&t).unwrap() {
                assert!(product_cycle_check(&t).unwrap(), "{idx:?}");
            } else {
                assert!(product_cycle_check(&t).is_err());
            }
        }
    }
}

#[test]
fn canonical_reduction_reaches_a_chain() {
    let mut reduced = 0;
    for letters in 2..=6 {
        let pool = transpositions(letters);
        for idx in all_tuples(pool.len(), letters - 1) {
            let t: Vec<Permutation> = idx.iter().map(|&i| pool[i].clone()).collect();
            if !generates_full_symmetric(&t).unwrap() {
                continue;
            }
            let word = canonical_reduce_a(&t).unwrap();
            let chain = hurwitz_word(&t, &word).unwrap();
            assert!(chain_vertices(&chain).is_some(), "{idx:?} via {word}");
            let product = |v: &[Permutation]| v.iter().skip(1).fold(v[0].clone(), |acc, g| acc.compose(g));
            assert_eq!(product(&chain), product(&t));
            reduced += 1;
        }
    }
    // (n+1)^(n−1) · n! generating tuples of n transpositions on n+1 letters.
    let expected: usize = (2..=6usize).map(|m| m.pow(m as u32 - 2) * factorial(m - 1)).sum();
    assert_eq!(reduced, expected);
}

/// Signed transpositions (i j) and (i −j) on n letters.
fn signed_transpositions(n: usize) -> Vec<SignedPermutation> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            out.push(SignedPermutation::transposition(n, a, b, false));
            out.push(SignedPermutation::transposition(n, a, b, true));
        }
    }
    out
}

fn random_word(rng: &mut ChaCha8Rng, n: usize) -> BraidWord {
    let len = rng.random_range(0..20);
    BraidWord::new((0..len).map(|_| Letter::new(rng.random_range(1..n), if rng.random_bool(0.5) { 1 } else { -1 }).unwrap()).collect())
}

#[test]
fn dn_invariant_is_a_braid_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 4..=6 {
        let pool = signed_transpositions(n);
        let tuples: Vec<Vec<usize>> = if n == 4 {
            all_tuples(pool.len(), n).collect()
        } else {
            (0..100_000).map(|_| (0..n).map(|_| rng.random_range(0..pool.len())).collect()).collect()
        };
        let mut values = BTreeSet::new();
        let mut seen = HashSet::new();
        for idx in tuples {
            let t: Vec<SignedPermutation> = idx.iter().map(|&i| pool[i].clone()).collect();
            if !generates_dn(&t).unwrap() {
                continue;
            }
            let inv = dn_invariant(&t).unwrap();
            values.insert(inv);
            if seen.insert(inv) || rng.random_range(0..50) == 0 {
                let moved = hurwitz_word(&t, &random_word(&mut rng, n)).unwrap();
                assert_eq!(dn_invariant(&moved).unwrap(), inv);
            }
        }
        let expected: BTreeSet<(usize, usize)> = (1..=n / 2).map(|k| (k, n - k)).collect();
        assert_eq!(values, expected, "D{n}");
    }
}

#[test]
fn dn_invariant_separates_tuple_orbits() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for n in [4, 5] {
        let pool = signed_transpositions(n);
        let mut by_value = std::collections::BTreeMap::new();
        let samples = (0..50_000).map(|_| (0..n).map(|_| rng.random_range(0..pool.len())).collect::<Vec<usize>>());
        for idx in samples {
            let t: Vec<SignedPermutation> = idx.iter().map(|&i| pool[i].clone()).collect();
            if generates_dn(&t).unwrap() {
                by_value.entry(dn_invariant(&t).unwrap()).or_insert(t);
            }
        }
        let orbits: Vec<HashSet<Vec<SignedPermutation>>> = by_value
            .values()
            .map(|t| hurwitz_orbit(t, 10_000_000).unwrap().tuples.into_iter().collect())
            .collect();
        assert_eq!(orbits.len(), n / 2, "D{n}");
        for (i, a) in orbits.iter().enumerate() {
            for b in &orbits[i + 1..] {
                assert!(a.is_disjoint(b));
            }
        }
    }
}

#[test]
fn bn_has_a_single_orbit() {
    for n in 2..=5 {
        let count = count_generating_orbits(CoxeterType::B(n), n, CountMode::Exhaustive { budget: 50_000_000 }).unwrap();
        assert_eq!(count.count(), 1, "B{n}");
    }
}
