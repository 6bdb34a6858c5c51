//! Exact root systems of the finite Coxeter groups, reflection tables,
//! reflection closures, universal arrangement matrices and extension families.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use crate::arrangement::ArrangementMatrix;
use crate::error::{Error, Result};
use crate::exact_number::{ratio, ExactNumber};
use crate::matrix::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoxeterType {
    A(usize),
    B(usize),
    D(usize),
    E6,
    E7,
    E8,
    F4,
    H3,
    H4,
    /// Dihedral group of order 2m.
    I2(usize),
}

impl CoxeterType {
    pub fn rank(&self) -> usize {
        match *self {
            CoxeterType::A(n) | CoxeterType::B(n) | CoxeterType::D(n) => n,
            CoxeterType::E6 => 6,
            CoxeterType::E7 => 7,
            CoxeterType::E8 => 8,
            CoxeterType::F4 | CoxeterType::H4 => 4,
            CoxeterType::H3 => 3,
            CoxeterType::I2(_) => 2,
        }
    }

    pub fn root_count(&self) -> usize {
        match *self {
            CoxeterType::A(n) => n * (n + 1),
            CoxeterType::B(n) => 2 * n * n,
            CoxeterType::D(n) => 2 * n * (n - 1),
            CoxeterType::E6 => 72,
            CoxeterType::E7 => 126,
            CoxeterType::E8 => 240,
            CoxeterType::F4 => 48,
            CoxeterType::H3 => 30,
            CoxeterType::H4 => 120,
            CoxeterType::I2(m) => 2 * m,
        }
    }

    fn validate(self) -> Result<Self> {
        let ok = match self {
            CoxeterType::A(n) => n >= 1,
            CoxeterType::B(n) => n >= 2,
            CoxeterType::D(n) => n >= 4,
            CoxeterType::I2(m) => m >= 3,
            _ => true,
        };
        if ok { Ok(self) } else { Err(Error::Unsupported(format!("no root system {self}"))) }
    }
}

impl fmt::Display for CoxeterType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoxeterType::A(n) => write!(f, "A{n}"),
            CoxeterType::B(n) => write!(f, "B{n}"),
            CoxeterType::D(n) => write!(f, "D{n}"),
            CoxeterType::E6 => f.write_str("E6"),
            CoxeterType::E7 => f.write_str("E7"),
            CoxeterType::E8 => f.write_str("E8"),
            CoxeterType::F4 => f.write_str("F4"),
            CoxeterType::H3 => f.write_str("H3"),
            CoxeterType::H4 => f.write_str("H4"),
            CoxeterType::I2(m) => write!(f, "I2({m})"),
        }
    }
}

impl FromStr for CoxeterType {
    type Err = Error;

    /// Accepts labels like `A3`, `b4`, `E8`, `H3`, `I2(5)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidLabel(s.to_string());
        let upper = s.to_ascii_uppercase();
        if let Some(rest) = upper.strip_prefix("I2(") {
            let m = rest.strip_suffix(')').ok_or_else(bad)?.parse().map_err(|_| bad())?;
            return CoxeterType::I2(m).validate();
        }
        let (head, tail) = upper.split_at(1.min(upper.len()));
        let n: usize = tail.parse().map_err(|_| bad())?;
        let t = match (head, n) {
            ("A", n) => CoxeterType::A(n),
            ("B", n) => CoxeterType::B(n),
            ("D", n) => CoxeterType::D(n),
            ("E", 6) => CoxeterType::E6,
            ("E", 7) => CoxeterType::E7,
            ("E", 8) => CoxeterType::E8,
            ("F", 4) => CoxeterType::F4,
            ("H", 3) => CoxeterType::H3,
            ("H", 4) => CoxeterType::H4,
            _ => return Err(bad()),
        };
        t.validate()
    }
}

/// Reflection identifiers index the positive roots.
pub type ReflectionId = u16;

pub struct RootSystem {
    kind: CoxeterType,
    roots: Vec<Vec<ExactNumber>>,
    norms: Vec<ExactNumber>,
    length_class: Vec<u8>,
    /// reflect[i][j]: index of the image of root j under the reflection in root i.
    reflect: Vec<Vec<u32>>,
    negative: Vec<u32>,
    positive: Vec<usize>,
    reflection_of_root: Vec<ReflectionId>,
    simple: Vec<ReflectionId>,
    /// conj[s][t]: the reflection r_s r_t r_s.
    conj: Vec<Vec<ReflectionId>>,
    /// 1/√(|α|²|β|²) for each pair of length classes.
    pair_scale: Vec<Vec<ExactNumber>>,
}

impl fmt::Debug for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RootSystem({}, {} roots)", self.kind, self.roots.len())
    }
}

fn int(x: i64) -> ExactNumber {
    ExactNumber::from_int(x)
}

fn half(x: i64) -> ExactNumber {
    ExactNumber::from_rational(ratio(x, 2))
}

fn unit(dim: usize, i: usize, s: i64) -> Vec<ExactNumber> {
    (0..dim).map(|k| if k == i { int(s) } else { ExactNumber::zero() }).collect()
}

fn pair_vectors(dim: usize, with_signs: bool) -> Vec<Vec<ExactNumber>> {
    let mut out = Vec::new();
    for i in 0..dim {
        for j in i + 1..dim {
            let signs: &[(i64, i64)] =
                if with_signs { &[(1, 1), (1, -1), (-1, 1), (-1, -1)] } else { &[(1, -1), (-1, 1)] };
            for &(a, b) in signs {
                let mut v = vec![ExactNumber::zero(); dim];
                v[i] = int(a);
                v[j] = int(b);
                out.push(v);
            }
        }
    }
    out
}

fn dot(a: &[ExactNumber], b: &[ExactNumber]) -> ExactNumber {
    let mut acc = ExactNumber::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}

fn e8_roots() -> Vec<Vec<ExactNumber>> {
    let mut roots = pair_vectors(8, true);
    for mask in 0u32..256 {
        if mask.count_ones() % 2 == 0 {
            roots.push((0..8).map(|k| half(if mask >> k & 1 == 1 { -1 } else { 1 })).collect());
        }
    }
    roots
}

/// All sign choices on the nonzero entries of `base`, over the even permutations of its positions.
fn even_permutation_roots(base: &[ExactNumber]) -> Vec<Vec<ExactNumber>> {
    let n = base.len();
    let mut perms = Vec::new();
    permutations(&mut (0..n).collect(), 0, &mut perms);
    let mut out = Vec::new();
    let nonzero: Vec<usize> = (0..n).filter(|&k| !base[k].is_zero()).collect();
    for p in perms.into_iter().filter(|p| is_even(p)) {
        for mask in 0u32..(1 << nonzero.len()) {
            let mut v = vec![ExactNumber::zero(); n];
            for (bit, &k) in nonzero.iter().enumerate() {
                v[p[k]] = if mask >> bit & 1 == 1 { -&base[k] } else { base[k].clone() };
            }
            out.push(v);
        }
    }
    out
}

fn permutations(cur: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == cur.len() {
        out.push(cur.clone());
        return;
    }
    for i in k..cur.len() {
        cur.swap(k, i);
        permutations(cur, k + 1, out);
        cur.swap(k, i);
    }
}

fn is_even(p: &[usize]) -> bool {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 0
}

fn raw_roots(kind: CoxeterType) -> Vec<Vec<ExactNumber>> {
    match kind {
        CoxeterType::A(n) => pair_vectors(n + 1, false),
        CoxeterType::B(n) => {
            let mut r = pair_vectors(n, true);
            for i in 0..n {
                r.push(unit(n, i, 1));
                r.push(unit(n, i, -1));
            }
            r
        }
        CoxeterType::D(n) => pair_vectors(n, true),
        CoxeterType::E8 => e8_roots(),
        CoxeterType::E7 => {
            let a = vec![half(1); 8];
            e8_roots().into_iter().filter(|r| dot(r, &a).is_zero()).collect()
        }
        CoxeterType::E6 => {
            let a = vec![half(1); 8];
            let mut b = vec![ExactNumber::zero(); 8];
            b[0] = int(-1);
            b[1] = int(-1);
            e8_roots().into_iter().filter(|r| dot(r, &a).is_zero() && dot(r, &b).is_zero()).collect()
        }
        CoxeterType::F4 => {
            let mut r = pair_vectors(4, true);
            for i in 0..4 {
                r.push(unit(4, i, 1));
                r.push(unit(4, i, -1));
            }
            for mask in 0u32..16 {
                r.push((0..4).map(|k| half(if mask >> k & 1 == 1 { -1 } else { 1 })).collect());
            }
            r
        }
        CoxeterType::H3 => {
            let phi = ExactNumber::two_cos(1, 5);
            let phi_inv = &phi - &ExactNumber::one();
            let mut r: Vec<Vec<ExactNumber>> = (0..3).flat_map(|i| [unit(3, i, 1), unit(3, i, -1)]).collect();
            let base = [&phi * &half(1), half(1), &phi_inv * &half(1)];
            r.extend(even_permutation_roots(&base));
            r
        }
        CoxeterType::H4 => {
            let phi = ExactNumber::two_cos(1, 5);
            let phi_inv = &phi - &ExactNumber::one();
            let mut r: Vec<Vec<ExactNumber>> = (0..4).flat_map(|i| [unit(4, i, 1), unit(4, i, -1)]).collect();
            for mask in 0u32..16 {
                r.push((0..4).map(|k| half(if mask >> k & 1 == 1 { -1 } else { 1 })).collect());
            }
            let base = [&phi * &half(1), half(1), &phi_inv * &half(1), ExactNumber::zero()];
            r.extend(even_permutation_roots(&base));
            r
        }
        CoxeterType::I2(m) => (0..2 * m as i64)
            .map(|k| {
                // (cos πk/m, sin πk/m), with sin θ = cos(π/2 − θ).
                let c = &ExactNumber::two_cos(k, m as u64) * &half(1);
                let s = &ExactNumber::two_cos(m as i64 - 2 * k, 2 * m as u64) * &half(1);
                vec![c, s]
            })
            .collect(),
    }
}

fn encode_vector(v: &[ExactNumber]) -> Vec<u8> {
    let mut key = Vec::new();
    for x in v {
        x.write_key(&mut key);
    }
    key
}

impl RootSystem {
    fn build(kind: CoxeterType) -> Result<Self> {
        let kind = kind.validate()?;
        let roots = raw_roots(kind);
        if roots.len() != kind.root_count() {
            return Err(Error::Invalid(format!("{kind}: built {} roots", roots.len())));
        }
        let index: HashMap<Vec<u8>, u32> =
            roots.iter().enumerate().map(|(i, r)| (encode_vector(r), i as u32)).collect();
        let norms: Vec<ExactNumber> = roots.iter().map(|r| dot(r, r)).collect();
        let mut distinct: Vec<ExactNumber> = norms.clone();
        distinct.sort_by(|a, b| a.to_f64().total_cmp(&b.to_f64()));
        distinct.dedup();
        let length_class: Vec<u8> =
            norms.iter().map(|n| distinct.iter().position(|d| d == n).unwrap() as u8).collect();

        let lookup = |v: &[ExactNumber]| -> Result<u32> {
            index.get(&encode_vector(v)).copied().ok_or_else(|| Error::Invalid(format!("{kind}: not closed under reflections")))
        };
        let mut reflect = Vec::with_capacity(roots.len());
        for (i, a) in roots.iter().enumerate() {
            let coef_scale = (&int(2)).div(&norms[i])?;
            let mut row = Vec::with_capacity(roots.len());
            for b in &roots {
                let c = &dot(a, b) * &coef_scale;
                if c.is_zero() {
                    row.push(lookup(b)?);
                } else {
                    let img: Vec<ExactNumber> = b.iter().zip(a).map(|(x, y)| x - &(&c * y)).collect();
                    row.push(lookup(&img)?);
                }
            }
            reflect.push(row);
        }
        let negative: Vec<u32> =
            roots.iter().map(|r| lookup(&r.iter().map(|x| -x).collect::<Vec<_>>())).collect::<Result<_>>()?;

        // Positive roots: a generic linear functional, checked to vanish on no root.
        let weights: Vec<f64> = (0..roots[0].len()).map(|k| (1.0 + 0.731 * k as f64).recip().powf(3.0) * (1.0 + (k as f64 * 1.37).sin() * 1e-3)).collect();
        let value = |r: &Vec<ExactNumber>| r.iter().zip(&weights).map(|(x, w)| x.to_f64() * w).sum::<f64>();
        let mut positive = Vec::new();
        for (i, r) in roots.iter().enumerate() {
            let v = value(r);
            if v.abs() < 1e-9 {
                return Err(Error::Invalid(format!("{kind}: functional vanishes on a root")));
            }
            if v > 0.0 {
                positive.push(i);
            }
        }
        let mut reflection_of_root = vec![0 as ReflectionId; roots.len()];
        for (id, &r) in positive.iter().enumerate() {
            reflection_of_root[r] = id as ReflectionId;
            reflection_of_root[negative[r] as usize] = id as ReflectionId;
        }
        let is_positive: Vec<bool> = {
            let mut v = vec![false; roots.len()];
            for &r in &positive {
                v[r] = true;
            }
            v
        };
        let simple: Vec<ReflectionId> = positive
            .iter()
            .enumerate()
            .filter(|&(_, &r)| positive.iter().filter(|&&p| !is_positive[reflect[r][p] as usize]).count() == 1)
            .map(|(id, _)| id as ReflectionId)
            .collect();
        if simple.len() != kind.rank() {
            return Err(Error::Invalid(format!("{kind}: found {} simple roots", simple.len())));
        }
        let conj: Vec<Vec<ReflectionId>> = positive
            .iter()
            .map(|&s| positive.iter().map(|&t| reflection_of_root[reflect[s][t] as usize]).collect())
            .collect();
        let pair_scale = distinct
            .iter()
            .map(|a| {
                distinct
                    .iter()
                    .map(|b| {
                        let prod = (a * b).to_rational().expect("rational squared lengths");
                        ExactNumber::sqrt_rational(&prod).and_then(|s| s.inv())
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RootSystem { kind, roots, norms, length_class, reflect, negative, positive, reflection_of_root, simple, conj, pair_scale })
    }

    pub fn kind(&self) -> CoxeterType {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.kind.rank()
    }

    pub fn ambient_dim(&self) -> usize {
        self.roots[0].len()
    }

    pub fn roots(&self) -> &[Vec<ExactNumber>] {
        &self.roots
    }

    pub fn root_norm(&self, root: usize) -> &ExactNumber {
        &self.norms[root]
    }

    pub fn length_class(&self, root: usize) -> u8 {
        self.length_class[root]
    }

    pub fn length_class_count(&self) -> usize {
        self.pair_scale.len()
    }

    /// Permutation of root indices induced by the reflection in `root`.
    pub fn reflection_table(&self, root: usize) -> &[u32] {
        &self.reflect[root]
    }

    pub fn negative(&self, root: usize) -> usize {
        self.negative[root] as usize
    }

    pub fn positive_roots(&self) -> &[usize] {
        &self.positive
    }

    pub fn num_reflections(&self) -> usize {
        self.positive.len()
    }

    /// The positive root of a reflection.
    pub fn reflection_root(&self, id: ReflectionId) -> usize {
        self.positive[id as usize]
    }

    pub fn reflection_of_root(&self, root: usize) -> ReflectionId {
        self.reflection_of_root[root]
    }

    pub fn simple_reflections(&self) -> &[ReflectionId] {
        &self.simple
    }

    /// r_s r_t r_s.
    pub fn conj(&self, s: ReflectionId, t: ReflectionId) -> ReflectionId {
        self.conj[s as usize][t as usize]
    }

    pub fn conj_row(&self, s: ReflectionId) -> &[ReflectionId] {
        &self.conj[s as usize]
    }

    pub fn check_ids(&self, ids: &[ReflectionId]) -> Result<()> {
        match ids.iter().find(|&&t| t as usize >= self.num_reflections()) {
            Some(&t) => Err(Error::IndexOutOfRange { index: t as usize, len: self.num_reflections() }),
            None => Ok(()),
        }
    }

    /// Entry 2(α·β)/(|α||β|) of the arrangement matrix of two reflections.
    pub fn arrangement_entry(&self, s: ReflectionId, t: ReflectionId) -> ExactNumber {
        let (a, b) = (self.reflection_root(s), self.reflection_root(t));
        let d = dot(&self.roots[a], &self.roots[b]);
        if d.is_zero() {
            return d;
        }
        let scale = &self.pair_scale[self.length_class[a] as usize][self.length_class[b] as usize];
        &(&d * &int(2)) * scale
    }

    pub fn arrangement_matrix(&self, tuple: &[ReflectionId]) -> Result<ArrangementMatrix> {
        self.check_ids(tuple)?;
        Ok(ArrangementMatrix::from_upper(tuple.len(), |i, j| self.arrangement_entry(tuple[i], tuple[j])))
    }

    /// Integer entries of the arrangement matrix, for simply-laced systems.
    pub fn arrangement_ints(&self, tuple: &[ReflectionId]) -> Option<Vec<i64>> {
        if self.length_class_count() != 1 || !self.norms[0].is_rational() {
            return None;
        }
        let n = tuple.len();
        let mut out = vec![0i64; n * n];
        for i in 0..n {
            out[i * n + i] = 2;
            for j in i + 1..n {
                let v = self.arrangement_entry(tuple[i], tuple[j]).to_integer()?;
                out[i * n + j] = v;
                out[j * n + i] = v;
            }
        }
        Some(out)
    }

    /// Reflection matrix I − 2ααᵀ/(α·α) in ambient coordinates.
    pub fn reflection_matrix(&self, id: ReflectionId) -> Matrix {
        let r = self.reflection_root(id);
        let a = &self.roots[r];
        let c = (&int(2)).div(&self.norms[r]).expect("roots are non-zero");
        let d = self.ambient_dim();
        Matrix::from_fn(d, d, |i, j| {
            let id = if i == j { ExactNumber::one() } else { ExactNumber::zero() };
            &id - &(&c * &(&a[i] * &a[j]))
        })
    }

    /// Smallest set of reflections containing `seed` and closed under conjugation by its members.
    pub fn closure_ids(&self, seed: &[ReflectionId]) -> Vec<ReflectionId> {
        let mut inside = vec![false; self.num_reflections()];
        let mut members: Vec<ReflectionId> = Vec::new();
        let mut queue = VecDeque::new();
        for &s in seed {
            if !inside[s as usize] {
                inside[s as usize] = true;
                queue.push_back(s);
            }
        }
        while let Some(x) = queue.pop_front() {
            members.push(x);
            for i in 0..members.len() {
                let y = members[i];
                for z in [self.conj(x, y), self.conj(y, x)] {
                    if !inside[z as usize] {
                        inside[z as usize] = true;
                        queue.push_back(z);
                    }
                }
            }
        }
        members.sort_unstable();
        members
    }

    pub fn closure_count(&self, seed: &[ReflectionId]) -> usize {
        self.closure_ids(seed).len()
    }

    /// Whether the reflections generate the whole group.
    pub fn is_generating(&self, tuple: &[ReflectionId]) -> bool {
        self.closure_count(tuple) == self.num_reflections()
    }

    /// Reflection closure of a set of root indices, with the subsystem identified.
    pub fn reflection_closure(&self, seed_roots: &[usize]) -> Result<Closure> {
        if let Some(&r) = seed_roots.iter().find(|&&r| r >= self.roots.len()) {
            return Err(Error::IndexOutOfRange { index: r, len: self.roots.len() });
        }
        let ids: Vec<ReflectionId> = seed_roots.iter().map(|&r| self.reflection_of_root(r)).collect();
        let closure = self.closure_ids(&ids);
        let mut roots: Vec<usize> =
            closure.iter().flat_map(|&t| { let r = self.reflection_root(t); [r, self.negative(r)] }).collect();
        roots.sort_unstable();
        let components = self.identify(&closure)?;
        Ok(Closure { roots, components })
    }

    /// Irreducible components of a closed set of reflections.
    pub fn identify(&self, closed: &[ReflectionId]) -> Result<Vec<CoxeterType>> {
        let mut comp = vec![usize::MAX; closed.len()];
        let mut out = Vec::new();
        for start in 0..closed.len() {
            if comp[start] != usize::MAX {
                continue;
            }
            let label = out.len();
            comp[start] = label;
            let mut stack = vec![start];
            let mut members = Vec::new();
            while let Some(i) = stack.pop() {
                members.push(closed[i]);
                for j in 0..closed.len() {
                    if comp[j] == usize::MAX && !self.arrangement_entry(closed[i], closed[j]).is_zero() {
                        comp[j] = label;
                        stack.push(j);
                    }
                }
            }
            out.push(self.identify_irreducible(&members)?);
        }
        out.sort();
        Ok(out)
    }

    fn identify_irreducible(&self, members: &[ReflectionId]) -> Result<CoxeterType> {
        let rows: Vec<Vec<ExactNumber>> = members.iter().map(|&t| self.roots[self.reflection_root(t)].clone()).collect();
        let rank = Matrix::from_rows(rows)?.rank();
        let count = 2 * members.len();
        let lengths: HashSet<u8> = members.iter().map(|&t| self.length_class[self.reflection_root(t)]).collect();
        let two_lengths = lengths.len() > 1;
        let found = match (rank, count, two_lengths) {
            (1, 2, _) => Some(CoxeterType::A(1)),
            (2, 6, false) => Some(CoxeterType::A(2)),
            (2, 8, true) => Some(CoxeterType::B(2)),
            (2, c, _) => Some(CoxeterType::I2(c / 2)),
            (3, 30, false) => Some(CoxeterType::H3),
            (4, 120, false) => Some(CoxeterType::H4),
            (4, 48, true) => Some(CoxeterType::F4),
            (6, 72, false) => Some(CoxeterType::E6),
            (7, 126, false) => Some(CoxeterType::E7),
            (8, 240, false) => Some(CoxeterType::E8),
            (n, c, false) if c == n * (n + 1) => Some(CoxeterType::A(n)),
            (n, c, true) if c == 2 * n * n => Some(CoxeterType::B(n)),
            (n, c, false) if n >= 4 && c == 2 * n * (n - 1) => Some(CoxeterType::D(n)),
            _ => None,
        };
        found.ok_or_else(|| Error::Invalid(format!("unrecognized subsystem: rank {rank}, {count} roots")))
    }

    /// All group elements as permutations of reflection identifiers (the action by conjugation).
    /// Refused when the count would exceed `limit`.
    pub fn conjugation_elements(&self, limit: usize) -> Result<Vec<Vec<ReflectionId>>> {
        let n = self.num_reflections();
        let identity: Vec<ReflectionId> = (0..n as ReflectionId).collect();
        let mut seen: HashSet<Vec<ReflectionId>> = HashSet::new();
        seen.insert(identity.clone());
        let mut order = vec![identity];
        let mut head = 0;
        while head < order.len() {
            let g = order[head].clone();
            head += 1;
            for &s in &self.simple {
                let row = self.conj_row(s);
                let h: Vec<ReflectionId> = g.iter().map(|&x| row[x as usize]).collect();
                if seen.insert(h.clone()) {
                    if order.len() >= limit {
                        return Err(Error::BudgetExceeded(format!("{}: more than {limit} elements", self.kind)));
                    }
                    order.push(h);
                }
            }
        }
        Ok(order)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Closure {
    pub roots: Vec<usize>,
    pub components: Vec<CoxeterType>,
}

impl Closure {
    pub fn label(&self) -> String {
        if self.components.is_empty() {
            return "trivial".into();
        }
        self.components.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("×")
    }
}

/// Shared, lazily built root system.
pub fn root_system(kind: CoxeterType) -> Result<Arc<RootSystem>> {
    static CACHE: OnceLock<Mutex<HashMap<CoxeterType, Arc<RootSystem>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(rs) = cache.lock().unwrap().get(&kind) {
        return Ok(rs.clone());
    }
    let rs = Arc::new(RootSystem::build(kind)?);
    cache.lock().unwrap().entry(kind).or_insert_with(|| rs.clone());
    Ok(rs)
}

/// Γ0 for A_n, B_n and D_n; the pinned first representative for the exceptional types.
pub fn universal_matrix(kind: CoxeterType) -> Result<ArrangementMatrix> {
    let kind = kind.validate()?;
    let one = ExactNumber::one;
    match kind {
        CoxeterType::A(n) => Ok(ArrangementMatrix::from_upper(n, |_, _| one())),
        CoxeterType::D(n) => Ok(ArrangementMatrix::from_upper(n, |i, j| {
            if i == 0 && j == n - 1 { ExactNumber::zero() } else { one() }
        })),
        CoxeterType::B(n) => Ok(ArrangementMatrix::from_upper(n, |_, j| {
            if j == n - 1 { ExactNumber::two_cos(1, 4) } else { one() }
        })),
        CoxeterType::I2(m) => Ok(ArrangementMatrix::from_upper(2, |_, _| ExactNumber::two_cos(1, m as u64))),
        _ => representatives(kind)?
            .into_iter()
            .next()
            .map(|r| r.matrix)
            .ok_or_else(|| Error::Unsupported(format!("no pinned representative for {kind}"))),
    }
}

/// One pinned arrangement per quasicoxeter characteristic-polynomial bucket.
#[derive(Clone, Debug)]
pub struct Representative {
    pub kind: CoxeterType,
    pub fingerprint: String,
    pub reflections: Vec<ReflectionId>,
    pub matrix: ArrangementMatrix,
    pub seed: u64,
}

const FIXTURES: &str = include_str!("../fixtures/representatives.json");

pub fn representatives(kind: CoxeterType) -> Result<Vec<Representative>> {
    let data: serde_json::Value =
        serde_json::from_str(FIXTURES).map_err(|e| Error::Invalid(format!("fixture file: {e}")))?;
    let rs = root_system(kind)?;
    let mut out = Vec::new();
    for entry in data["groups"].as_array().into_iter().flatten() {
        if entry["group"].as_str() != Some(&kind.to_string()) {
            continue;
        }
        let seed = entry["seed"].as_u64().unwrap_or(0);
        for bucket in entry["buckets"].as_array().into_iter().flatten() {
            let reflections: Vec<ReflectionId> = bucket["reflections"]
                .as_array()
                .into_iter()
                .flatten()
                .map(|v| v.as_u64().map(|x| x as ReflectionId).ok_or_else(|| Error::Invalid("fixture reflection".into())))
                .collect::<Result<_>>()?;
            let matrix = rs.arrangement_matrix(&reflections)?;
            let fingerprint = bucket["fingerprint"].as_str().unwrap_or_default().to_string();
            out.push(Representative { kind, fingerprint, reflections, matrix, seed });
        }
    }
    Ok(out)
}

/// Parameterized extensions of universal matrices by one vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtensionFamily {
    /// Γ0(A_n) plus a vertex joined by +1 edges to the last k vertices.
    AChain { n: usize, k: usize },
    /// Γ0(A_n) plus a vertex with q edges −1 then p edges +1 at the end.
    ASigned { n: usize, p: usize, q: usize },
    /// Γ0(D_n) plus a vertex joined to k middle vertices, not to the ends of the deleted edge.
    DFirst { n: usize, k: usize },
    /// As [`ExtensionFamily::DFirst`], and also joined to the last vertex.
    DSecond { n: usize, k: usize },
    /// The six sign patterns (c_1, c_n) with middle column of q −1s then p +1s; case in 1..=6.
    DExt { case: u8, n: usize, p: usize, q: usize },
    /// Γ0(B_n) plus a vertex with q −1s, p +1s on the all-ones block, 0 to the √2 vertex.
    BFirst { n: usize, p: usize, q: usize },
    /// Γ0(B_n) plus a vertex with p √2 entries first on the block and +1 to the √2 vertex.
    BSecond { n: usize, p: usize },
    /// Γ0(B_n) plus a vertex with all +1 on the block and √2 to the √2 vertex.
    BThird { n: usize },
}

fn signed_column(len: usize, p: usize, q: usize) -> Vec<i64> {
    let mut v = vec![0; len - p - q];
    v.extend(std::iter::repeat_n(-1, q));
    v.extend(std::iter::repeat_n(1, p));
    v
}

impl ExtensionFamily {
    fn check(&self) -> Result<()> {
        let ok = match *self {
            ExtensionFamily::AChain { n, k } => n >= 1 && k <= n,
            ExtensionFamily::ASigned { n, p, q } => n >= 1 && p + q <= n,
            ExtensionFamily::DFirst { n, k } | ExtensionFamily::DSecond { n, k } => n >= 4 && k <= n - 2,
            ExtensionFamily::DExt { case, n, p, q } => (1..=6).contains(&case) && n >= 4 && p + q <= n - 2,
            ExtensionFamily::BFirst { n, p, q } => n >= 2 && p + q < n,
            ExtensionFamily::BSecond { n, p } => n >= 2 && p < n,
            ExtensionFamily::BThird { n } => n >= 2,
        };
        if ok { Ok(()) } else { Err(Error::Precondition(format!("parameters out of range: {self:?}"))) }
    }

    /// Every legal parameter choice for base size n.
    pub fn sweep(n: usize) -> Vec<ExtensionFamily> {
        let mut out = Vec::new();
        for k in 0..=n {
            out.push(ExtensionFamily::AChain { n, k });
        }
        for p in 0..=n {
            for q in 0..=n - p {
                out.push(ExtensionFamily::ASigned { n, p, q });
            }
        }
        if n >= 4 {
            for k in 0..=n - 2 {
                out.push(ExtensionFamily::DFirst { n, k });
                out.push(ExtensionFamily::DSecond { n, k });
            }
            for case in 1..=6 {
                for p in 0..=n - 2 {
                    for q in 0..=n - 2 - p {
                        out.push(ExtensionFamily::DExt { case, n, p, q });
                    }
                }
            }
        }
        if n >= 2 {
            for p in 0..n {
                for q in 0..n - p {
                    out.push(ExtensionFamily::BFirst { n, p, q });
                }
                out.push(ExtensionFamily::BSecond { n, p });
            }
            out.push(ExtensionFamily::BThird { n });
        }
        out
    }

    pub fn matrix(&self) -> Result<ArrangementMatrix> {
        self.check()?;
        let zero = ExactNumber::zero();
        let one = ExactNumber::one();
        let root2 = ExactNumber::two_cos(1, 4);
        let from_int = |v: i64| ExactNumber::from_int(v);
        Ok(match *self {
            ExtensionFamily::AChain { n, k } => ArrangementMatrix::from_upper(n, |_, _| one.clone())
                .extended(&signed_column(n, k, 0).iter().map(|&v| from_int(v)).collect::<Vec<_>>()),
            ExtensionFamily::ASigned { n, p, q } => ArrangementMatrix::from_upper(n, |_, _| one.clone())
                .extended(&signed_column(n, p, q).iter().map(|&v| from_int(v)).collect::<Vec<_>>()),
            ExtensionFamily::DFirst { n, k } | ExtensionFamily::DSecond { n, k } => {
                let base = universal_matrix(CoxeterType::D(n))?;
                let mut col = vec![zero.clone(); n];
                for c in col.iter_mut().take(n - 1).skip(n - 1 - k) {
                    *c = one.clone();
                }
                if matches!(self, ExtensionFamily::DSecond { .. }) {
                    col[n - 1] = one.clone();
                }
                base.extended(&col)
            }
            ExtensionFamily::DExt { case, n, p, q } => {
                let (c1, cn) = match case {
                    1 => (0, 0),
                    2 => (0, 1),
                    3 => (1, 0),
                    4 => (1, 1),
                    5 => (-1, 1),
                    _ => (-1, -1),
                };
                let base = universal_matrix(CoxeterType::D(n))?;
                let mut col = vec![from_int(c1)];
                col.extend(signed_column(n - 2, p, q).iter().map(|&v| from_int(v)));
                col.push(from_int(cn));
                base.extended(&col)
            }
            ExtensionFamily::BFirst { n, p, q } => {
                let mut col: Vec<ExactNumber> = signed_column(n - 1, p, q).iter().map(|&v| from_int(v)).collect();
                col.push(zero);
                universal_matrix(CoxeterType::B(n))?.extended(&col)
            }
            ExtensionFamily::BSecond { n, p } => {
                let mut col: Vec<ExactNumber> = (0..n - 1).map(|j| if j < p { root2.clone() } else { zero.clone() }).collect();
                col.push(one);
                universal_matrix(CoxeterType::B(n))?.extended(&col)
            }
            ExtensionFamily::BThird { n } => {
                let mut col = vec![one; n - 1];
                col.push(root2);
                universal_matrix(CoxeterType::B(n))?.extended(&col)
            }
        })
    }

    /// The closed-form determinant as displayed.
    pub fn displayed_det(&self) -> i64 {
        let (n, p, q, k) = match *self {
            ExtensionFamily::AChain { n, k } => (n, 0, 0, k),
            ExtensionFamily::ASigned { n, p, q } => (n, p, q, 0),
            ExtensionFamily::DFirst { n, k } | ExtensionFamily::DSecond { n, k } => (n, 0, 0, k),
            ExtensionFamily::DExt { n, p, q, .. } => (n, p, q, 0),
            ExtensionFamily::BFirst { n, p, q } => (n, p, q, 0),
            ExtensionFamily::BSecond { n, p } => (n, p, 0, 0),
            ExtensionFamily::BThird { n } => (n, 0, 0, 0),
        };
        let (n, p, q, k) = (n as i64, p as i64, q as i64, k as i64);
        match *self {
            ExtensionFamily::AChain { .. } => 2 * (n + 1) - k * (n - k + 1),
            ExtensionFamily::ASigned { .. } => (p - q).pow(2) - (p + q) * (n + 1) + 2 * (n + 1),
            ExtensionFamily::DFirst { .. } => 8 - 4 * k,
            ExtensionFamily::DSecond { .. } => 8 - n,
            ExtensionFamily::DExt { case, .. } => match case {
                1 => 4 * (2 - p - q),
                2 => 8 - n - 8 * q,
                3 => 8 - n - 8 * p,
                4 => 4 * (3 + p - n - 3 * q),
                5 => 4 * (1 - p - q),
                _ => 4 * (3 + q - n - 3 * p),
            },
            ExtensionFamily::BFirst { .. } => 2 * (2 - p - q),
            ExtensionFamily::BSecond { .. } => 4 - n,
            ExtensionFamily::BThird { .. } => 2,
        }
    }

    /// Known misprints in the displayed closed forms, with the corrected value.
    pub fn erratum(&self) -> Option<(i64, &'static str)> {
        match *self {
            ExtensionFamily::DExt { case: 3, n, q, .. } => {
                Some((8 - n as i64 - 8 * q as i64, "mirror of the case (0,1) under reversing the D-vertices; q and p swapped in the display"))
            }
            _ => None,
        }
    }
}

impl fmt::Display for ExtensionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ExtensionFamily::AChain { n, k } => write!(f, "B(A{n},k={k})"),
            ExtensionFamily::ASigned { n, p, q } => write!(f, "A{n}+(p={p},q={q})"),
            ExtensionFamily::DFirst { n, k } => write!(f, "D{n}-first(k={k})"),
            ExtensionFamily::DSecond { n, k } => write!(f, "D{n}-second(k={k})"),
            ExtensionFamily::DExt { case, n, p, q } => write!(f, "D{n}-ext{case}(p={p},q={q})"),
            ExtensionFamily::BFirst { n, p, q } => write!(f, "B{n}-first(p={p},q={q})"),
            ExtensionFamily::BSecond { n, p } => write!(f, "B{n}-second(p={p})"),
            ExtensionFamily::BThird { n } => write!(f, "B{n}-third"),
        }
    }
}

impl FromStr for ExtensionFamily {
    type Err = Error;

    /// Parses the [`fmt::Display`] form, e.g. `B(A8,k=3)`, `D8-ext2(p=1,q=0)`, `B4-third`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::InvalidLabel(t.to_string());
        let nums: Vec<usize> = t
            .split(|c: char| !c.is_ascii_digit())
            .filter(|x| !x.is_empty())
            .map(|x| x.parse().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let family = match (t.chars().next(), nums.as_slice()) {
            (Some('B'), &[n, k]) if t.starts_with("B(A") => ExtensionFamily::AChain { n, k },
            (Some('A'), &[n, p, q]) => ExtensionFamily::ASigned { n, p, q },
            (Some('D'), &[n, k]) if t.contains("-first") => ExtensionFamily::DFirst { n, k },
            (Some('D'), &[n, k]) if t.contains("-second") => ExtensionFamily::DSecond { n, k },
            (Some('D'), &[n, case, p, q]) => ExtensionFamily::DExt { case: u8::try_from(case).map_err(|_| bad())?, n, p, q },
            (Some('B'), &[n, p, q]) => ExtensionFamily::BFirst { n, p, q },
            (Some('B'), &[n, p]) if t.contains("-second") => ExtensionFamily::BSecond { n, p },
            (Some('B'), &[n]) => ExtensionFamily::BThird { n },
            _ => return Err(bad()),
        };
        if family.to_string() != t {
            return Err(bad());
        }
        family.check()?;
        Ok(family)
    }
}

impl ArrangementMatrix {
    /// Appends a vertex whose entries against the existing vertices are `col`.
    pub fn extended(&self, col: &[ExactNumber]) -> ArrangementMatrix {
        let n = self.n();
        assert_eq!(col.len(), n, "extension column length");
        ArrangementMatrix::from_upper(n + 1, |i, j| if j == n { col[i].clone() } else { self.get(i, j).clone() })
    }

}

/// Inclusions of finite Coxeter systems of the same rank, into `sup`.
pub fn same_rank_inclusions(sup: CoxeterType) -> Vec<Vec<CoxeterType>> {
    use CoxeterType::*;
    let mut out: Vec<Vec<CoxeterType>> = Vec::new();
    let d = |k: usize| -> Vec<CoxeterType> {
        match k {
            2 => vec![A(1), A(1)],
            3 => vec![A(3)],
            k => vec![D(k)],
        }
    };
    let b = |k: usize| -> Vec<CoxeterType> { if k == 1 { vec![A(1)] } else { vec![B(k)] } };
    match sup {
        B(n) => {
            if n >= 4 {
                out.push(vec![D(n)]);
            }
            if n == 2 {
                out.push(vec![A(1), A(1)]);
            }
            if n == 3 {
                out.push(vec![A(1), A(1), A(1)]);
            }
            for k in 2..n {
                out.push([d(k), b(n - k)].concat());
            }
            for k in 1..n {
                if k <= n - k {
                    out.push([b(k), b(n - k)].concat());
                }
            }
        }
        D(n) => {
            if n == 4 {
                out.push(vec![A(1); 4]);
            }
            for k in 2..=n / 2 {
                out.push([d(k), d(n - k)].concat());
            }
        }
        F4 => {
            out.push(vec![D(4)]);
            out.push(vec![B(4)]);
        }
        E6 => {
            out.push(vec![A(1), A(5)]);
            out.push(vec![A(2), A(2), A(2)]);
        }
        E7 => {
            out.push(vec![A(7)]);
            out.push(vec![A(1), A(3), A(3)]);
            out.push(vec![A(2), A(5)]);
            out.push(vec![A(1), D(5)]);
        }
        E8 => {
            out.push(vec![D(8)]);
            out.push(vec![A(8)]);
            out.push(vec![A(1), A(2), A(5)]);
            out.push(vec![A(1), A(7)]);
            out.push(vec![A(4), A(4)]);
            out.push(vec![A(3), D(5)]);
            out.push(vec![A(1), E7]);
        }
        H3 => out.push(vec![A(1), A(1), A(1)]),
        H4 => {
            out.push(vec![A(1), H3]);
            out.push(vec![I2(5), I2(5)]);
            out.push(vec![A(2), A(2)]);
        }
        _ => {}
    }
    for v in out.iter_mut() {
        v.sort();
    }
    out.sort();
    out.dedup();
    out
}

impl CoxeterType {
    /// The label reflection_closure reports for this system (B2 and I2(4), A2 and I2(3) coincide).
    pub fn max_alias(&self) -> CoxeterType {
        match *self {
            CoxeterType::I2(3) => CoxeterType::A(2),
            CoxeterType::I2(4) => CoxeterType::I2(4),
            other => other,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extension_names_round_trip() {
        for n in 1..=8 {
            for f in ExtensionFamily::sweep(n) {
                assert_eq!(f.to_string().parse::<ExtensionFamily>().unwrap(), f);
            }
        }
        for bad in ["B(A8,k=9)", "D8-ext7(p=0,q=0)", "D8-ext2(p=1, q=0)", "X4", ""] {
            assert!(bad.parse::<ExtensionFamily>().is_err(), "{bad}");
        }
    }

    #[test]
    fn root_counts_and_simple_roots() {
        for kind in [
            CoxeterType::A(2),
            CoxeterType::A(4),
            CoxeterType::B(3),
            CoxeterType::D(5),
            CoxeterType::F4,
            CoxeterType::H3,
            CoxeterType::I2(5),
            CoxeterType::E6,
        ] {
            let rs = root_system(kind).unwrap();
            assert_eq!(rs.roots().len(), kind.root_count(), "{kind}");
            assert_eq!(rs.simple_reflections().len(), kind.rank(), "{kind}");
            assert!(rs.is_generating(rs.simple_reflections()), "{kind}");
            let closure = rs
                .reflection_closure(&rs.simple_reflections().iter().map(|&s| rs.reflection_root(s)).collect::<Vec<_>>())
                .unwrap();
            assert_eq!(closure.components, vec![kind.max_alias()], "{kind}");
        }
    }

    #[test]
    fn reflection_tables_are_involutions() {
        let rs = root_system(CoxeterType::H3).unwrap();
        for i in 0..rs.roots().len() {
            let t = rs.reflection_table(i);
            for j in 0..t.len() {
                assert_eq!(t[t[j] as usize] as usize, j);
                let fixed = t[j] as usize == j;
                assert_eq!(fixed, dot(&rs.roots()[i], &rs.roots()[j]).is_zero());
            }
        }
    }

    #[test]
    fn labels_parse() {
        assert_eq!("a3".parse::<CoxeterType>().unwrap(), CoxeterType::A(3));
        assert_eq!("I2(5)".parse::<CoxeterType>().unwrap(), CoxeterType::I2(5));
        assert!("E9".parse::<CoxeterType>().is_err());
        assert!("D3".parse::<CoxeterType>().is_err());
    }

    #[test]
    fn orthogonal_triple_in_b3() {
        let rs = root_system(CoxeterType::B(3)).unwrap();
        // ±e_i are the short roots; their reflections commute.
        let shorts: Vec<ReflectionId> = (0..rs.num_reflections() as ReflectionId)
            .filter(|&t| rs.length_class(rs.reflection_root(t)) == 0)
            .collect();
        assert_eq!(shorts.len(), 3);
        assert!(!rs.is_generating(&shorts));
        let c = rs.reflection_closure(&shorts.iter().map(|&t| rs.reflection_root(t)).collect::<Vec<_>>()).unwrap();
        assert_eq!(c.roots.len(), 6);
        assert_eq!(c.label(), "A1×A1×A1");
    }

    #[test]
    fn universal_dets() {
        assert_eq!(universal_matrix(CoxeterType::A(3)).unwrap().det(), ExactNumber::from_int(4));
        assert_eq!(universal_matrix(CoxeterType::D(5)).unwrap().det(), ExactNumber::from_int(4));
        assert_eq!(ExtensionFamily::AChain { n: 4, k: 2 }.matrix().unwrap().det(), ExactNumber::from_int(4));
        assert!(ExtensionFamily::AChain { n: 8, k: 3 }.matrix().unwrap().det().is_zero());
    }

    #[test]
    fn inclusion_queries() {
        assert!(same_rank_inclusions(CoxeterType::E7).contains(&vec![CoxeterType::A(7)]));
        assert!(same_rank_inclusions(CoxeterType::B(5)).contains(&vec![CoxeterType::D(5)]));
        assert!(same_rank_inclusions(CoxeterType::A(5)).is_empty());
    }
}

