//! Breadth-first orbit enumeration under the braid group, finiteness verdicts,
//! the 3×3 classification and counts of orbits on generating reflection tuples.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::hash::Hash;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::arith::max_order_with_phi_at_most;
use crate::arrangement::ArrangementMatrix;
use crate::braid_action::{hurwitz_in_place, GroupElement};
use crate::catalog::{root_system, CoxeterType, ReflectionId, RootSystem};
use crate::error::{Error, Result};
use crate::exact_number::ExactNumber;
use crate::matrix::Matrix;
use crate::quasicoxeter::{
    charpoly_int, cox_fingerprint, cox_matrix, cox_matrix_int, cyclo_fingerprint, CharPolyFingerprint,
};
use crate::arith::euler_phi;
use crate::poly::Poly;

pub const DEFAULT_MATRIX_CAP: usize = 1_000_000;
pub const DEFAULT_TUPLE_CAP: usize = 10_000_000;
pub const DEFAULT_EXHAUSTIVE_BUDGET: u64 = 20_000_000;
pub const DEFAULT_SEEDED_BUDGET: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Finite(usize),
    ExceededCap(usize),
}

impl Verdict {
    pub fn is_finite(&self) -> bool {
        matches!(self, Verdict::Finite(_))
    }

    fn to_json(self) -> (Value, usize) {
        match self {
            Verdict::Finite(k) => (json!("Finite"), k),
            Verdict::ExceededCap(k) => (json!("ExceededCap"), k),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitInvariants {
    pub det: ExactNumber,
    pub fingerprint: CharPolyFingerprint,
    pub order: Option<u64>,
}

impl OrbitInvariants {
    pub fn of(b: &ArrangementMatrix) -> Result<Self> {
        let m = cox_matrix(b);
        let fingerprint = cox_fingerprint(b)?;
        let order = fingerprint.implied_order().and_then(|n| periodic_order(&m, n));
        Ok(OrbitInvariants { det: b.det(), fingerprint, order })
    }

    pub fn to_json(&self) -> Result<Value> {
        Ok(json!({
            "det": self.det.format_expr()?,
            "charpoly": self.fingerprint.to_json(),
            "order": self.order,
        }))
    }
}

fn mat_pow(m: &Matrix, mut e: u64) -> Matrix {
    let mut base = m.clone();
    let mut acc = Matrix::identity(m.rows());
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc
}

/// Smallest divisor d of `bound` with M^d = I, if any.
fn periodic_order(m: &Matrix, bound: u64) -> Option<u64> {
    let mut divisors = crate::arith::divisors(bound);
    divisors.sort_unstable();
    divisors.into_iter().find(|&d| mat_pow(m, d).is_identity())
}

#[derive(Clone, Debug)]
pub struct OrbitReport {
    pub verdict: Verdict,
    /// Sign-canonical forms sorted by key; complete when the verdict is finite.
    pub representatives: Vec<ArrangementMatrix>,
    pub invariants: OrbitInvariants,
}

impl OrbitReport {
    pub fn to_json(&self, limit: usize) -> Result<Value> {
        let (verdict, size) = self.verdict.to_json();
        let reps: Vec<Value> = self.representatives.iter().take(limit).map(|m| m.to_json()).collect();
        Ok(json!({
            "verdict": verdict,
            "size": size,
            "invariants": self.invariants.to_json()?,
            "representatives": reps,
            "representatives_total": self.representatives.len(),
        }))
    }
}

fn check_cap(cap: usize) -> Result<()> {
    if cap == 0 {
        return Err(Error::InvalidCap("cap must be positive".into()));
    }
    Ok(())
}

/// Level-synchronous BFS. Neighbours of a level are computed in parallel and merged
/// in frontier order, so the result does not depend on the thread count.
fn bfs<S, K>(
    start: S,
    cap: usize,
    key: impl Fn(&S) -> K + Sync,
    neighbours: impl Fn(&S) -> Vec<S> + Sync,
) -> (Vec<(K, S)>, bool)
where
    S: Send + Sync + Clone,
    K: Eq + Hash + Clone + Send + Sync,
{
    let mut seen: HashSet<K> = HashSet::new();
    let mut states = Vec::new();
    let k0 = key(&start);
    seen.insert(k0.clone());
    states.push((k0, start.clone()));
    let mut frontier = vec![start];
    while !frontier.is_empty() {
        let expanded: Vec<Vec<(K, S)>> = frontier
            .par_iter()
            .map(|s| neighbours(s).into_iter().map(|t| (key(&t), t)).collect())
            .collect();
        let mut next = Vec::new();
        for (k, s) in expanded.into_iter().flatten() {
            if seen.insert(k.clone()) {
                if states.len() >= cap {
                    states.push((k, s));
                    return (states, false);
                }
                states.push((k, s.clone()));
                next.push(s);
            }
        }
        frontier = next;
    }
    (states, true)
}

fn matrix_neighbours(b: &ArrangementMatrix) -> Vec<ArrangementMatrix> {
    let mut out = Vec::with_capacity(2 * b.n());
    for i in 1..b.n() {
        for e in [1, -1] {
            let m = crate::braid_action::act_sigma(b, i, e).expect("generator in range");
            out.push(m.sign_canonical());
        }
    }
    out
}

/// Orbit of the sign class of B under σ_1^{±1}, …, σ_{n−1}^{±1}.
pub fn matrix_orbit(b: &ArrangementMatrix, cap: usize) -> Result<OrbitReport> {
    check_cap(cap)?;
    let start = b.sign_canonical();
    let (states, closed) = bfs(start, cap, |m| m.key(), matrix_neighbours);
    let seen = states.len();
    let mut sorted = states;
    sorted.sort_by(|a, b| a.0.cmp(&b.0));
    let representatives: Vec<ArrangementMatrix> = sorted.into_iter().map(|(_, m)| m).collect();
    let invariants = OrbitInvariants::of(&representatives[0])?;
    let verdict = if closed { Verdict::Finite(seen) } else { Verdict::ExceededCap(seen) };
    Ok(OrbitReport { verdict, representatives, invariants })
}

#[derive(Clone, Debug)]
pub struct TupleOrbitReport<G> {
    pub verdict: Verdict,
    pub tuples: Vec<Vec<G>>,
    pub product: Option<G>,
}

/// Orbit of a tuple under the Hurwitz action, with exact tuple equality.
pub fn hurwitz_orbit<G>(tuple: &[G], cap: usize) -> Result<TupleOrbitReport<G>>
where
    G: GroupElement + Eq + Hash + Send + Sync,
{
    check_cap(cap)?;
    let n = tuple.len();
    let (states, closed) = bfs(
        tuple.to_vec(),
        cap,
        |t| t.clone(),
        |t| {
            let mut out = Vec::with_capacity(2 * n);
            for i in 0..n.saturating_sub(1) {
                for inverse in [false, true] {
                    let mut u = t.clone();
                    hurwitz_in_place(&mut u, i, inverse);
                    out.push(u);
                }
            }
            out
        },
    );
    let seen = states.len();
    let verdict = if closed { Verdict::Finite(seen) } else { Verdict::ExceededCap(seen) };
    Ok(TupleOrbitReport {
        verdict,
        tuples: states.into_iter().map(|(_, t)| t).collect(),
        product: crate::quasicoxeter::quasicox_of_tuple(tuple),
    })
}

fn hurwitz_ids(rs: &RootSystem, t: &mut [ReflectionId], i: usize, inverse: bool) {
    if inverse {
        let (a, b) = (t[i], t[i + 1]);
        t[i] = b;
        t[i + 1] = rs.conj(b, a);
    } else {
        let (a, b) = (t[i], t[i + 1]);
        t[i] = rs.conj(a, b);
        t[i + 1] = a;
    }
}

/// Hurwitz orbit of a tuple of reflections of a root system.
pub fn reflection_tuple_orbit(rs: &RootSystem, tuple: &[ReflectionId], cap: usize) -> Result<TupleOrbitReport<ReflectionId>> {
    check_cap(cap)?;
    rs.check_ids(tuple)?;
    let n = tuple.len();
    let (states, closed) = bfs(
        tuple.to_vec(),
        cap,
        |t| t.clone(),
        |t| {
            let mut out = Vec::with_capacity(2 * n);
            for i in 0..n.saturating_sub(1) {
                for inverse in [false, true] {
                    let mut u = t.clone();
                    hurwitz_ids(rs, &mut u, i, inverse);
                    out.push(u);
                }
            }
            out
        },
    );
    let seen = states.len();
    let verdict = if closed { Verdict::Finite(seen) } else { Verdict::ExceededCap(seen) };
    let mut tuples: Vec<Vec<ReflectionId>> = states.into_iter().map(|(_, t)| t).collect();
    tuples.sort();
    Ok(TupleOrbitReport { verdict, tuples, product: None })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    Finite,
    Infinite,
    Unknown(String),
}

impl Classification {
    pub fn label(&self) -> &'static str {
        match self {
            Classification::Finite => "Finite",
            Classification::Infinite => "Infinite",
            Classification::Unknown(_) => "Unknown",
        }
    }
}

/// Whether a = 2cos(πr) for a rational r, decided exactly.
///
/// The companion matrix [[a, −1], [1, 0]] has eigenvalues e^{±iπr}; for a ≠ ±2 it is
/// diagonalizable, so a is of this form iff the matrix has finite order N, and then
/// φ(N) ≤ 2·[Q(a):Q] bounds the search.
pub fn is_rational_angle(a: &ExactNumber) -> bool {
    let two = ExactNumber::from_int(2);
    if *a == two || *a == -&two {
        return true;
    }
    if !a.is_real() {
        return false;
    }
    let bound = max_order_with_phi_at_most(2 * euler_phi(a.conductor()));
    companion_order(a, bound).is_some()
}

/// Order of [[a, −1], [1, 0]] if it is at most `bound`.
pub fn companion_order(a: &ExactNumber, bound: u64) -> Option<u64> {
    let m = Matrix::from_rows(vec![
        vec![a.clone(), ExactNumber::from_int(-1)],
        vec![ExactNumber::one(), ExactNumber::zero()],
    ])
    .expect("2×2");
    let mut acc = m.clone();
    for k in 1..=bound {
        if acc.is_identity() {
            return Some(k);
        }
        acc = &acc * &m;
    }
    None
}

/// Decides finiteness of the braid orbit of a 3×3 arrangement matrix.
pub fn classify_3x3(b: &ArrangementMatrix, cap: usize) -> Result<Classification> {
    check_cap(cap)?;
    if b.n() != 3 {
        return Err(Error::Precondition("classify_3x3 needs a 3×3 matrix".into()));
    }
    if b.is_decomposable().is_some() {
        return Ok(Classification::Finite);
    }
    if b.det().is_zero() {
        // Entries (2cosα, 2cosβ, 2cos(α∓β)); the third is determined by the first two.
        let finite = is_rational_angle(b.get(0, 1)) && is_rational_angle(b.get(0, 2));
        return Ok(if finite { Classification::Finite } else { Classification::Infinite });
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let a = b.get(i, j);
        let two = ExactNumber::from_int(2);
        if *a == two || *a == -&two || !is_rational_angle(a) {
            return Ok(Classification::Infinite);
        }
    }
    let report = matrix_orbit(b, cap)?;
    Ok(match report.verdict {
        Verdict::Finite(_) => Classification::Finite,
        Verdict::ExceededCap(k) => Classification::Unknown(format!("cap reached after {k} states")),
    })
}

/// Whether the reflections generate the whole group of `rs`.
pub fn is_generating(tuple: &[ReflectionId], rs: &RootSystem) -> bool {
    rs.is_generating(tuple)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMode {
    /// Every tuple in R^n, refused above the state budget.
    Exhaustive { budget: u64 },
    /// Random generating tuples until `budget` consecutive samples find nothing new.
    Seeded { budget: usize, seed: u64 },
}

/// One orbit of generating tuples modulo simultaneous conjugation.
#[derive(Clone, Debug)]
pub struct OrbitClass {
    pub representative: Vec<ReflectionId>,
    /// Tuples (exhaustive) or conjugacy classes of tuples (seeded) in the orbit.
    pub size: u64,
    pub det: ExactNumber,
    pub fingerprint: CharPolyFingerprint,
}

#[derive(Clone, Debug)]
pub struct OrbitCount {
    pub kind: CoxeterType,
    pub length: usize,
    pub classes: Vec<OrbitClass>,
    /// Exhaustive: number of generating tuples. Seeded: samples drawn.
    pub examined: u64,
    /// Seeded only: consecutive samples since the last new orbit.
    pub stable_samples: Option<usize>,
}

impl OrbitCount {
    pub fn count(&self) -> usize {
        self.classes.len()
    }

    pub fn to_json(&self) -> Result<Value> {
        let classes: Vec<Value> = self
            .classes
            .iter()
            .map(|c| {
                Ok(json!({
                    "representative": c.representative,
                    "size": c.size,
                    "det": c.det.format_expr()?,
                    "charpoly": c.fingerprint.to_json(),
                }))
            })
            .collect::<Result<_>>()?;
        Ok(json!({
            "group": self.kind.to_string(),
            "length": self.length,
            "orbits": self.classes.len(),
            "examined": self.examined,
            "stable_samples": self.stable_samples,
            "classes": classes,
        }))
    }
}

fn class_of(rs: &RootSystem, representative: Vec<ReflectionId>, size: u64) -> Result<OrbitClass> {
    let b = rs.arrangement_matrix(&representative)?;
    Ok(OrbitClass { det: b.det(), fingerprint: cox_fingerprint(&b)?, representative, size })
}

/// Partitions generating n-tuples of reflections into Hurwitz orbits up to conjugation.
pub fn count_generating_orbits(kind: CoxeterType, n: usize, mode: CountMode) -> Result<OrbitCount> {
    let rs = root_system(kind)?;
    if n == 0 {
        return Err(Error::Precondition("tuple length must be positive".into()));
    }
    match mode {
        CountMode::Exhaustive { budget } => exhaustive(&rs, n, budget),
        CountMode::Seeded { budget, seed } => seeded(&rs, n, budget, seed),
    }
}

struct UnionFind(Vec<u32>);

impl UnionFind {
    fn find(&mut self, x: u32) -> u32 {
        let mut r = x;
        while self.0[r as usize] != r {
            r = self.0[r as usize];
        }
        let mut y = x;
        while self.0[y as usize] != r {
            let next = self.0[y as usize];
            self.0[y as usize] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi as usize] = lo;
        }
    }
}

fn exhaustive(rs: &RootSystem, n: usize, budget: u64) -> Result<OrbitCount> {
    let r = rs.num_reflections() as u64;
    let total = r.checked_pow(n as u32).filter(|&t| t <= budget).ok_or_else(|| {
        Error::BudgetExceeded(format!("{}^{} tuples exceed the exhaustive budget {budget}", r, n))
    })?;
    let encode = |t: &[ReflectionId]| t.iter().fold(0u64, |acc, &x| acc * r + x as u64);
    let decode = |mut idx: u64| {
        let mut t = vec![0 as ReflectionId; n];
        for k in (0..n).rev() {
            t[k] = (idx % r) as ReflectionId;
            idx /= r;
        }
        t
    };
    const UNSEEN: u32 = u32::MAX;
    let mut orbit_of = vec![UNSEEN; total as usize];
    // (first tuple index, size) for generating orbits.
    let mut orbits: Vec<(u64, u64)> = Vec::new();
    let mut generating_orbit: Vec<Option<u32>> = Vec::new();
    let mut queue: Vec<u64> = Vec::new();
    let mut label = 0u32;
    for start in 0..total {
        if orbit_of[start as usize] != UNSEEN {
            continue;
        }
        let t0 = decode(start);
        let generating = rs.is_generating(&t0);
        orbit_of[start as usize] = label;
        queue.clear();
        queue.push(start);
        let mut head = 0;
        while head < queue.len() {
            let t = decode(queue[head]);
            head += 1;
            for i in 0..n - 1 {
                for inverse in [false, true] {
                    let mut u = t.clone();
                    hurwitz_ids(rs, &mut u, i, inverse);
                    let idx = encode(&u);
                    if orbit_of[idx as usize] == UNSEEN {
                        orbit_of[idx as usize] = label;
                        queue.push(idx);
                    }
                }
            }
        }
        if generating {
            generating_orbit.push(Some(orbits.len() as u32));
            orbits.push((start, queue.len() as u64));
        } else {
            generating_orbit.push(None);
        }
        label += 1;
    }
    let mut uf = UnionFind((0..orbits.len() as u32).collect());
    for (o, &(start, _)) in orbits.iter().enumerate() {
        let t = decode(start);
        for &s in rs.simple_reflections() {
            let u: Vec<ReflectionId> = t.iter().map(|&x| rs.conj(s, x)).collect();
            let other = generating_orbit[orbit_of[encode(&u) as usize] as usize]
                .expect("conjugation preserves generation");
            uf.union(o as u32, other);
        }
    }
    let mut by_root: BTreeMap<u32, (u64, u64)> = BTreeMap::new();
    for (o, &(start, size)) in orbits.iter().enumerate() {
        let root = uf.find(o as u32);
        let e = by_root.entry(root).or_insert((start, 0));
        e.0 = e.0.min(start);
        e.1 += size;
    }
    let examined: u64 = orbits.iter().map(|o| o.1).sum();
    let classes = by_root
        .values()
        .map(|&(start, size)| class_of(rs, decode(start), size))
        .collect::<Result<Vec<_>>>()?;
    Ok(OrbitCount { kind: rs.kind(), length: n, classes, examined, stable_samples: None })
}

/// Canonical forms of tuples modulo simultaneous conjugation.
pub struct Canonicalizer {
    elements: Vec<Vec<ReflectionId>>,
    /// For each reflection t, the elements sending t to the least reflection of its class.
    to_least: Vec<Vec<u32>>,
}

impl Canonicalizer {
    pub fn new(rs: &RootSystem, limit: usize) -> Result<Self> {
        let elements = rs.conjugation_elements(limit)?;
        let r = rs.num_reflections();
        let mut least = vec![ReflectionId::MAX; r];
        for g in &elements {
            for t in 0..r {
                least[t] = least[t].min(g[t]);
            }
        }
        let mut to_least = vec![Vec::new(); r];
        for (gi, g) in elements.iter().enumerate() {
            for t in 0..r {
                if g[t] == least[t] {
                    to_least[t].push(gi as u32);
                }
            }
        }
        Ok(Canonicalizer { elements, to_least })
    }

    pub fn group_size(&self) -> usize {
        self.elements.len()
    }

    /// The lexicographically least conjugate of the tuple.
    pub fn canonical(&self, t: &[ReflectionId]) -> Vec<ReflectionId> {
        let mut best: Option<Vec<ReflectionId>> = None;
        let mut cand = vec![0 as ReflectionId; t.len()];
        for &gi in &self.to_least[t[0] as usize] {
            let g = &self.elements[gi as usize];
            for (c, &x) in cand.iter_mut().zip(t) {
                *c = g[x as usize];
            }
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand.clone());
            }
        }
        best.expect("identity is available")
    }
}

fn seeded(rs: &RootSystem, n: usize, budget: usize, seed: u64) -> Result<OrbitCount> {
    if budget == 0 {
        return Err(Error::InvalidCap("seeded budget must be positive".into()));
    }
    let canon = Canonicalizer::new(rs, 2_000_000)?;
    let r = rs.num_reflections();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut known: HashMap<Vec<ReflectionId>, u32> = HashMap::new();
    let mut classes: Vec<(Vec<ReflectionId>, u64)> = Vec::new();
    let mut stable = 0usize;
    let mut drawn = 0u64;
    while stable < budget {
        let t: Vec<ReflectionId> = (0..n).map(|_| rng.random_range(0..r) as ReflectionId).collect();
        drawn += 1;
        if !rs.is_generating(&t) {
            continue;
        }
        let c = canon.canonical(&t);
        if known.contains_key(&c) {
            stable += 1;
            continue;
        }
        stable = 0;
        let id = classes.len() as u32;
        let (states, _) = bfs(c, usize::MAX, |s| s.clone(), |s| {
            let mut out = Vec::with_capacity(2 * n);
            for i in 0..n - 1 {
                for inverse in [false, true] {
                    let mut u = s.clone();
                    hurwitz_ids(rs, &mut u, i, inverse);
                    out.push(canon.canonical(&u));
                }
            }
            out
        });
        let least = states.iter().map(|(k, _)| k).min().cloned().expect("non-empty orbit");
        let size = states.len() as u64;
        for (k, _) in states {
            known.insert(k, id);
        }
        classes.push((least, size));
    }
    classes.sort();
    let classes = classes.into_iter().map(|(t, size)| class_of(rs, t, size)).collect::<Result<Vec<_>>>()?;
    Ok(OrbitCount { kind: rs.kind(), length: n, classes, examined: drawn, stable_samples: Some(stable) })
}

/// Buckets random generating tuples by the fingerprint of their quasicoxeter element.
#[derive(Clone, Debug)]
pub struct FingerprintSearch {
    pub kind: CoxeterType,
    pub samples: usize,
    pub seed: u64,
    /// Fingerprint label → (hits, first tuple found, fingerprint).
    pub buckets: BTreeMap<String, (usize, Vec<ReflectionId>, CharPolyFingerprint)>,
}

fn fingerprint_of_tuple(rs: &RootSystem, t: &[ReflectionId]) -> Result<CharPolyFingerprint> {
    if let Some(ints) = rs.arrangement_ints(t) {
        let n = t.len();
        let cp = charpoly_int(n, &cox_matrix_int(n, &ints));
        if let Ok(coeffs) = cp.iter().map(|&c| i64::try_from(c)).collect::<std::result::Result<Vec<_>, _>>() {
            return cyclo_fingerprint(&Poly::from_ints(&coeffs));
        }
    }
    cox_fingerprint(&rs.arrangement_matrix(t)?)
}

/// Samples `samples` generating tuples of length n. Work is split into chunks with
/// their own derived seeds, so results do not depend on the thread count.
pub fn fingerprint_search(kind: CoxeterType, n: usize, samples: usize, seed: u64) -> Result<FingerprintSearch> {
    const CHUNK: usize = 512;
    let rs = root_system(kind)?;
    let r = rs.num_reflections();
    let chunks = samples.div_ceil(CHUNK);
    let partial: Vec<Result<Vec<(String, Vec<ReflectionId>, CharPolyFingerprint)>>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (c as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let want = CHUNK.min(samples - c * CHUNK);
            let mut out = Vec::with_capacity(want);
            while out.len() < want {
                let t: Vec<ReflectionId> = (0..n).map(|_| rng.random_range(0..r) as ReflectionId).collect();
                if rs.is_generating(&t) {
                    let f = fingerprint_of_tuple(&rs, &t)?;
                    out.push((f.label(), t, f));
                }
            }
            Ok(out)
        })
        .collect();
    let mut buckets: BTreeMap<String, (usize, Vec<ReflectionId>, CharPolyFingerprint)> = BTreeMap::new();
    for chunk in partial {
        for (label, t, f) in chunk? {
            buckets.entry(label).and_modify(|e| e.0 += 1).or_insert((1, t, f));
        }
    }
    Ok(FingerprintSearch { kind, samples, seed, buckets })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    #[test]
    fn two_by_two_is_trivial() {
        let b = ArrangementMatrix::from_rows(vec![
            vec![ExactNumber::from_int(2), ExactNumber::two_cos(1, 7)],
            vec![ExactNumber::two_cos(1, 7), ExactNumber::from_int(2)],
        ])
        .unwrap();
        assert_eq!(matrix_orbit(&b, 10).unwrap().verdict, Verdict::Finite(1));
        assert!(matrix_orbit(&b, 0).is_err());
    }

    #[test]
    fn indefinite_triangle_exceeds_cap() {
        let b = ArrangementMatrix::from_ints(&[&[2, -2, -2], &[-2, 2, -2], &[-2, -2, 2]]).unwrap();
        assert!(matches!(matrix_orbit(&b, 200).unwrap().verdict, Verdict::ExceededCap(_)));
        assert_eq!(classify_3x3(&b, 200).unwrap(), Classification::Infinite);
    }

    #[test]
    fn transposition_pair_orbit() {
        let t = vec![Permutation::transposition(3, 0, 1), Permutation::transposition(3, 1, 2)];
        assert_eq!(hurwitz_orbit(&t, 100).unwrap().verdict, Verdict::Finite(3));
        let same = vec![t[0].clone(), t[0].clone()];
        assert_eq!(hurwitz_orbit(&same, 100).unwrap().verdict, Verdict::Finite(1));
    }

    #[test]
    fn classify_examples() {
        let a3 = ArrangementMatrix::from_ints(&[&[2, 1, 1], &[1, 2, 1], &[1, 1, 2]]).unwrap();
        assert_eq!(classify_3x3(&a3, 1000).unwrap(), Classification::Finite);
        let twos = ArrangementMatrix::from_ints(&[&[2, 2, 2], &[2, 2, 2], &[2, 2, 2]]).unwrap();
        assert_eq!(classify_3x3(&twos, 1000).unwrap(), Classification::Finite);
        assert!(is_rational_angle(&ExactNumber::two_cos(3, 7)));
        assert!(!is_rational_angle(&ExactNumber::from_int(3)));
        assert!(!is_rational_angle(&ExactNumber::from_rational(crate::exact_number::ratio(1, 2))));
    }

    #[test]
    fn small_counts() {
        let c = count_generating_orbits(CoxeterType::A(3), 3, CountMode::Exhaustive { budget: 1_000_000 }).unwrap();
        assert_eq!(c.count(), 1);
        let s = count_generating_orbits(CoxeterType::A(3), 3, CountMode::Seeded { budget: 200, seed: 1 }).unwrap();
        assert_eq!(s.count(), 1);
        assert!(count_generating_orbits(CoxeterType::E6, 6, CountMode::Exhaustive { budget: 1000 }).is_err());
    }
}
