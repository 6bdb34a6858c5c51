//! Reconstruction of reflection tuples from an arrangement matrix.
//!
//! A realization stores, for every index i, a vector v_i and a covector v_i^∨ in
//! coordinates of some basis of the ambient space, with v_i^∨(v_j) = B_ij. The
//! reflection r_i is x ↦ x − v_i^∨(x) v_i.
//!
//! Two coordinate frames are used. [`general_realization`] works in the frame
//! of the construction itself: the dual basis {u_i} of the covectors indexed by
//! I″ followed by the extra vectors {w_j} indexed by J′. [`minimal_realization`]
//! and [`unique_realization`] use the vectors {v_j}_{j∈J} as basis.

use std::collections::{HashMap, HashSet, VecDeque};

use serde_json::{json, Value};

use crate::arrangement::ArrangementMatrix;
use crate::braid_action::{act_sigma, Letter};
use crate::error::{Error, Result};
use crate::exact_number::ExactNumber;
use crate::matrix::Matrix;
use crate::quasicoxeter::split_uv;

type Vector = Vec<ExactNumber>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    dim: usize,
    vectors: Vec<Vector>,
    covectors: Vec<Vector>,
    rows: Vec<usize>,
    extra_rows: Vec<usize>,
    cols: Vec<usize>,
    extra_cols: Vec<usize>,
    /// Full coefficient table a′ (n × |I″|), identity rows for indices in I″.
    row_coefs: Matrix,
    /// Full coefficient table b′ (|J″| × n), identity columns for indices in J″.
    col_coefs: Matrix,
    /// Maps our coordinates to the construction frame; `None` means the frames agree.
    to_frame: Option<Matrix>,
}

fn pair(cov: &[ExactNumber], v: &[ExactNumber]) -> ExactNumber {
    let mut s = ExactNumber::zero();
    for (a, b) in cov.iter().zip(v) {
        if !a.is_zero() && !b.is_zero() {
            s += &(a * b);
        }
    }
    s
}

fn axpy(y: &mut [ExactNumber], c: &ExactNumber, x: &[ExactNumber]) {
    if c.is_zero() {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi += &(c * xi);
        }
    }
}

fn sorted_unique(idx: &[usize], n: usize) -> Result<Vec<usize>> {
    let mut v = idx.to_vec();
    v.sort_unstable();
    v.dedup();
    if v.len() != idx.len() || v.last().is_some_and(|&x| x >= n) {
        return Err(Error::Invalid(format!("bad index set {idx:?} for size {n}")));
    }
    Ok(v)
}

/// Greedy lexicographic choice of rows (or columns) of `m` among `within` that span
/// the same space as all of them.
fn greedy_basis(m: &Matrix, within: &[usize], by_rows: bool) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut rank = 0;
    for &k in within {
        let mut trial = chosen.clone();
        trial.push(k);
        let sub = if by_rows {
            m.submatrix(&trial, &(0..m.cols()).collect::<Vec<_>>())
        } else {
            m.submatrix(&(0..m.rows()).collect::<Vec<_>>(), &trial)
        };
        let r = sub.rank();
        if r > rank {
            rank = r;
            chosen = trial;
        }
    }
    chosen
}

/// The lexicographically first index set of size `r` whose principal minor is
/// non-singular.
fn first_principal_basis(b: &Matrix, r: usize) -> Option<Vec<usize>> {
    let n = b.rows();
    let mut comb: Vec<usize> = (0..r).collect();
    loop {
        if !b.submatrix(&comb, &comb).det().is_zero() {
            return Some(comb);
        }
        let mut k = r;
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            if comb[k] < n - r + k {
                break;
            }
        }
        comb[k] += 1;
        for t in k + 1..r {
            comb[t] = comb[t - 1] + 1;
        }
    }
}

/// Row and column relations of B over the bases I (rows) and J (columns):
/// row i = Σ_{I} a_{i,i1} row i1 and column j = Σ_{J} b_{j1,j} column j1.
fn relations(b: &Matrix, rows: &[usize], cols: &[usize]) -> Result<(Matrix, Matrix)> {
    let n = b.rows();
    let inv = b.submatrix(rows, cols).inverse()?;
    let all: Vec<usize> = (0..n).collect();
    let a = &b.submatrix(&all, cols) * &inv;
    let bb = &inv * &b.submatrix(rows, &all);
    Ok((a, bb))
}

impl Realization {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    pub fn covectors(&self) -> &[Vector] {
        &self.covectors
    }

    pub fn vector(&self, i: usize) -> &[ExactNumber] {
        &self.vectors[i]
    }

    pub fn covector(&self, i: usize) -> &[ExactNumber] {
        &self.covectors[i]
    }

    /// Basis rows I, extra rows I′, basis columns J and extra columns J′.
    pub fn index_sets(&self) -> (&[usize], &[usize], &[usize], &[usize]) {
        (&self.rows, &self.extra_rows, &self.cols, &self.extra_cols)
    }

    /// v_i^∨(v_j).
    pub fn pairing(&self, i: usize, j: usize) -> ExactNumber {
        pair(&self.covectors[i], &self.vectors[j])
    }

    pub fn gram(&self) -> Matrix {
        let n = self.len();
        Matrix::from_fn(n, n, |i, j| self.pairing(i, j))
    }

    pub fn reflection(&self, i: usize) -> Matrix {
        let (v, c) = (&self.vectors[i], &self.covectors[i]);
        Matrix::from_fn(self.dim, self.dim, |a, b| {
            let t = &v[a] * &c[b];
            if a == b { ExactNumber::one() - t } else { -t }
        })
    }

    pub fn reflections(&self) -> Vec<Matrix> {
        (0..self.len()).map(|i| self.reflection(i)).collect()
    }

    /// The ordered product r_1 r_2 ⋯ r_n.
    pub fn product(&self) -> Matrix {
        self.reflections().iter().fold(Matrix::identity(self.dim), |acc, r| &acc * r)
    }

    /// Product of the reflections named by a word of 1-based indices, left to right.
    pub fn word_matrix(&self, word: &[usize]) -> Result<Matrix> {
        let mut m = Matrix::identity(self.dim);
        for &k in word {
            if k == 0 || k > self.len() {
                return Err(Error::IndexOutOfRange { index: k, len: self.len() });
            }
            m = &m * &self.reflection(k - 1);
        }
        Ok(m)
    }

    /// Reflection matrices written in another basis, given by coordinate vectors.
    pub fn reflections_in_basis(&self, basis: &[Vector]) -> Result<Vec<Matrix>> {
        if basis.len() != self.dim || basis.iter().any(|v| v.len() != self.dim) {
            return Err(Error::Dimension("basis must have dim vectors of length dim".into()));
        }
        let p = Matrix::from_fn(self.dim, self.dim, |i, j| basis[j][i].clone());
        let pinv = p.inverse()?;
        Ok(self.reflections().iter().map(|r| &(&pinv * r) * &p).collect())
    }

    /// Every vector annihilated by all covectors lies in the span of the vectors.
    pub fn is_minimal(&self) -> bool {
        if self.dim == 0 {
            return true;
        }
        let cov = Matrix::from_rows(self.covectors.clone()).expect("covectors have equal length");
        let span = Matrix::from_fn(self.dim, self.len(), |i, j| self.vectors[j][i].clone());
        cov.kernel().iter().all(|k| span.solve(k).is_some())
    }

    /// Checks Gram recovery against B, the dimension count and minimality.
    pub fn check(&self, b: &ArrangementMatrix) -> Result<()> {
        let n = b.n();
        if self.len() != n {
            return Err(Error::Dimension(format!("{} reflections for a size {n} matrix", self.len())));
        }
        for i in 0..n {
            for j in 0..n {
                if self.pairing(i, j) != *b.get(i, j) {
                    return Err(Error::Invalid(format!("pairing ({i},{j}) does not recover B")));
                }
            }
        }
        let expected = self.rows.len() + self.extra_rows.len() + self.extra_cols.len();
        if self.dim != expected {
            return Err(Error::Invalid(format!("dimension {} differs from {expected}", self.dim)));
        }
        if !self.is_minimal() {
            return Err(Error::Invalid("realization is not minimal".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let enc = |vs: &[Vector]| -> Value {
            vs.iter().map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect()
        };
        let one_based = |v: &[usize]| v.iter().map(|k| k + 1).collect::<Vec<_>>();
        json!({
            "dim": self.dim,
            "rows": one_based(&self.rows),
            "extra_rows": one_based(&self.extra_rows),
            "cols": one_based(&self.cols),
            "extra_cols": one_based(&self.extra_cols),
            "vectors": enc(&self.vectors),
            "covectors": enc(&self.covectors),
            "reflections": self.reflections().iter().map(|r| enc(&r.to_rows())).collect::<Vec<_>>(),
        })
    }
}

/// The realization of an invertible matrix: v_j = e_j and v_i^∨ = row i of B.
pub fn unique_realization(b: &ArrangementMatrix) -> Result<Realization> {
    if b.det().is_zero() {
        return Err(Error::Singular);
    }
    minimal_realization(b)
}

/// The realization in dimension rank(B), in the basis {v_j}_{j∈J}.
///
/// J is the lexicographically first index set with a non-singular principal
/// minor of full rank; for matrices without one, I and J are chosen greedily.
pub fn minimal_realization(b: &ArrangementMatrix) -> Result<Realization> {
    let n = b.n();
    let m = b.to_matrix();
    let all: Vec<usize> = (0..n).collect();
    let r = m.rank();
    let (rows, cols) = match first_principal_basis(&m, r) {
        Some(s) => (s.clone(), s),
        None => (greedy_basis(&m, &all, true), greedy_basis(&m, &all, false)),
    };
    let (a, bb) = relations(&m, &rows, &cols)?;
    let vectors = (0..n).map(|j| bb.column(j)).collect();
    let covectors = (0..n).map(|i| cols.iter().map(|&j| m.get(i, j).clone()).collect()).collect();
    Ok(Realization {
        dim: r,
        vectors,
        covectors,
        to_frame: Some(m.submatrix(&rows, &cols)),
        rows,
        extra_rows: Vec::new(),
        cols,
        extra_cols: Vec::new(),
        row_coefs: a,
        col_coefs: bb,
    })
}

/// The realization in which the covectors indexed by `row_set` (I″) and the
/// vectors indexed by `col_set` (J″) are linearly independent.
///
/// I ⊆ I″ and J ⊆ J″ are chosen greedily, I′ = I″∖I and J′ = J″∖J. `constants`
/// lists the free coefficients a′_{i,i1} (i ∉ I″ ascending, then i1 ∈ I′ ascending)
/// followed by b′_{j1,j} (j ∉ J″ ascending, then j1 ∈ J′ ascending).
pub fn general_realization(
    b: &ArrangementMatrix,
    row_set: &[usize],
    col_set: &[usize],
    constants: &[ExactNumber],
) -> Result<Realization> {
    let n = b.n();
    let m = b.to_matrix();
    let all: Vec<usize> = (0..n).collect();
    let row_set = sorted_unique(row_set, n)?;
    let col_set = sorted_unique(col_set, n)?;
    let r = m.rank();
    let rows = greedy_basis(&m, &row_set, true);
    let cols = greedy_basis(&m, &col_set, false);
    if rows.len() != r || cols.len() != r {
        return Err(Error::Invalid("index sets do not contain bases of the rows and columns".into()));
    }
    let extra_rows: Vec<usize> = row_set.iter().copied().filter(|i| !rows.contains(i)).collect();
    let extra_cols: Vec<usize> = col_set.iter().copied().filter(|j| !cols.contains(j)).collect();
    let rest_rows: Vec<usize> = all.iter().copied().filter(|i| !row_set.contains(i)).collect();
    let rest_cols: Vec<usize> = all.iter().copied().filter(|j| !col_set.contains(j)).collect();
    let want = rest_rows.len() * extra_rows.len() + rest_cols.len() * extra_cols.len();
    if constants.len() != want {
        return Err(Error::Invalid(format!("expected {want} constants, got {}", constants.len())));
    }
    let (a, bb) = relations(&m, &rows, &cols)?;
    let (a_free, b_free) = constants.split_at(rest_rows.len() * extra_rows.len());

    let pos_row: HashMap<usize, usize> = row_set.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    let pos_col: HashMap<usize, usize> = col_set.iter().enumerate().map(|(p, &j)| (j, p)).collect();
    let pos_basis_row: HashMap<usize, usize> = rows.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    let pos_basis_col: HashMap<usize, usize> = cols.iter().enumerate().map(|(p, &j)| (j, p)).collect();

    let mut row_coefs = Matrix::zeros(n, row_set.len());
    for i in 0..n {
        if let Some(&p) = pos_row.get(&i) {
            row_coefs.set(i, p, ExactNumber::one());
            continue;
        }
        let t = rest_rows.iter().position(|&x| x == i).expect("index outside I″");
        let free = &a_free[t * extra_rows.len()..(t + 1) * extra_rows.len()];
        for (&i1, c) in extra_rows.iter().zip(free) {
            row_coefs.set(i, pos_row[&i1], c.clone());
        }
        for &i2 in &rows {
            let mut v = a.get(i, pos_basis_row[&i2]).clone();
            for (&i1, c) in extra_rows.iter().zip(free) {
                v -= &(c * a.get(i1, pos_basis_row[&i2]));
            }
            row_coefs.set(i, pos_row[&i2], v);
        }
    }
    let mut col_coefs = Matrix::zeros(col_set.len(), n);
    for j in 0..n {
        if let Some(&p) = pos_col.get(&j) {
            col_coefs.set(p, j, ExactNumber::one());
            continue;
        }
        let t = rest_cols.iter().position(|&x| x == j).expect("index outside J″");
        let free = &b_free[t * extra_cols.len()..(t + 1) * extra_cols.len()];
        for (&j1, c) in extra_cols.iter().zip(free) {
            col_coefs.set(pos_col[&j1], j, c.clone());
        }
        for &j1 in &cols {
            let mut v = bb.get(pos_basis_col[&j1], j).clone();
            for (&j2, c) in extra_cols.iter().zip(free) {
                v -= &(c * bb.get(pos_basis_col[&j1], j2));
            }
            col_coefs.set(pos_col[&j1], j, v);
        }
    }

    let du = row_set.len();
    let dim = du + extra_cols.len();
    let covectors: Vec<Vector> = (0..n)
        .map(|i| {
            let mut c = vec![ExactNumber::zero(); dim];
            for p in 0..du {
                c[p] = row_coefs.get(i, p).clone();
            }
            c
        })
        .collect();
    let mut vectors: Vec<Vector> = vec![Vec::new(); n];
    for &j in &col_set {
        let mut v: Vector = row_set.iter().map(|&i| m.get(i, j).clone()).collect();
        v.resize(dim, ExactNumber::zero());
        if let Some(w) = extra_cols.iter().position(|&x| x == j) {
            v[du + w] = ExactNumber::one();
        }
        vectors[j] = v;
    }
    for &j in &rest_cols {
        let mut v = vec![ExactNumber::zero(); dim];
        for (p, &j1) in col_set.iter().enumerate() {
            let c = col_coefs.get(p, j).clone();
            let src = vectors[j1].clone();
            axpy(&mut v, &c, &src);
        }
        vectors[j] = v;
    }
    let real = Realization {
        dim,
        vectors,
        covectors,
        rows,
        extra_rows,
        cols,
        extra_cols,
        row_coefs,
        col_coefs,
        to_frame: None,
    };
    real.check(b)?;
    Ok(real)
}

/// The quasicoxeter element r_1⋯r_n computed from B and the realization's
/// coefficient tables, written in the realization's coordinates.
///
/// In the construction frame it is the block operator with u-part
/// δ − B b′(δ+U)^{−1}a′, identity on the w-part and coupling −b′(δ+U)^{−1}a′
/// from the u-part into the w-part.
pub fn quasicox_degenerate(b: &ArrangementMatrix, real: &Realization) -> Result<Matrix> {
    let n = b.n();
    if real.len() != n {
        return Err(Error::Dimension("realization does not match the matrix".into()));
    }
    let m = b.to_matrix();
    let (u, _) = split_uv(b);
    let t = (&Matrix::identity(n) + &u).inverse()?;
    let q = &(&real.col_coefs * &t) * &real.row_coefs;
    let row_set: Vec<usize> = {
        let mut v = [real.rows.clone(), real.extra_rows.clone()].concat();
        v.sort_unstable();
        v
    };
    let col_set: Vec<usize> = {
        let mut v = [real.cols.clone(), real.extra_cols.clone()].concat();
        v.sort_unstable();
        v
    };
    let x = &Matrix::identity(row_set.len()) - &(&m.submatrix(&row_set, &col_set) * &q);
    let du = row_set.len();
    let dim = du + real.extra_cols.len();
    let mut c = Matrix::identity(dim);
    for a in 0..du {
        for bcol in 0..du {
            c.set(a, bcol, x.get(a, bcol).clone());
        }
    }
    for (w, j) in real.extra_cols.iter().enumerate() {
        let p = col_set.iter().position(|x| x == j).expect("J′ inside J″");
        for bcol in 0..du {
            c.set(du + w, bcol, -q.get(p, bcol));
        }
    }
    Ok(match &real.to_frame {
        None => c,
        Some(p) => &(&p.inverse()? * &c) * p,
    })
}

/// A reflection stored as a normalized (vector, covector) pair: the first
/// non-zero vector coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReflectionPair {
    pub vector: Vector,
    pub covector: Vector,
}

impl ReflectionPair {
    pub fn new(vector: Vector, covector: Vector) -> Result<Self> {
        let lead = vector.iter().find(|x| !x.is_zero()).ok_or_else(|| Error::Invalid("zero vector".into()))?;
        let s = lead.inv()?;
        Ok(ReflectionPair {
            vector: vector.iter().map(|x| x * &s).collect(),
            covector: covector.iter().map(|x| x.div(&s).expect("non-zero scale")).collect(),
        })
    }

    pub fn of(real: &Realization, i: usize) -> Self {
        Self::new(real.vectors[i].clone(), real.covectors[i].clone()).expect("vectors of a realization are non-zero")
    }

    /// Conjugate by a reflection s: s r s.
    pub fn conjugate_by(&self, s: &ReflectionPair) -> Self {
        let mut v = self.vector.clone();
        axpy(&mut v, &-pair(&s.covector, &self.vector), &s.vector);
        let mut c = self.covector.clone();
        axpy(&mut c, &-pair(&self.covector, &s.vector), &s.covector);
        Self::new(v, c).expect("conjugation preserves non-zero vectors")
    }
}

/// All conjugates of the generating reflections inside the group they generate,
/// or an error once more than `budget` are found.
pub fn reflection_conjugates(gens: &[ReflectionPair], budget: usize) -> Result<Vec<ReflectionPair>> {
    let mut seen: HashSet<ReflectionPair> = gens.iter().cloned().collect();
    let mut order: Vec<ReflectionPair> = Vec::new();
    let mut queue: VecDeque<ReflectionPair> = VecDeque::new();
    for g in gens {
        if !order.contains(g) {
            order.push(g.clone());
            queue.push_back(g.clone());
        }
    }
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.conjugate_by(g);
            if seen.insert(y.clone()) {
                if seen.len() > budget {
                    return Err(Error::BudgetExceeded(format!("more than {budget} conjugate reflections")));
                }
                order.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(order)
}

/// The orbit of the vectors v_j under the group generated by the reflections.
pub fn root_closure(real: &Realization, budget: usize) -> Result<Vec<Vector>> {
    let gens: Vec<ReflectionPair> = (0..real.len()).map(|i| ReflectionPair::of(real, i)).collect();
    let mut seen: HashSet<Vector> = HashSet::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    for v in &real.vectors {
        if seen.insert(v.clone()) {
            order.push(v.clone());
            queue.push_back(v.clone());
        }
    }
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let mut y = x.clone();
            axpy(&mut y, &-pair(&g.covector, &x), &g.vector);
            if seen.insert(y.clone()) {
                if seen.len() > budget {
                    return Err(Error::BudgetExceeded(format!("more than {budget} roots")));
                }
                order.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(order)
}

/// Breadth-first enumeration of the matrix group generated by `gens`.
pub fn enumerate_group(gens: &[Matrix], budget: usize) -> Result<Vec<Matrix>> {
    let dim = gens.first().map_or(0, |g| g.rows());
    let id = Matrix::identity(dim);
    let mut seen: HashSet<Matrix> = HashSet::from([id.clone()]);
    let mut order = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = &x * g;
            if seen.insert(y.clone()) {
                if seen.len() > budget {
                    return Err(Error::BudgetExceeded(format!("group has more than {budget} elements")));
                }
                order.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(order)
}

/// Whether r_i lies in the group generated by the other reflections of the
/// minimal realization.
///
/// Membership is decided among the conjugates of the other reflections; a
/// negative answer is confirmed by enumerating the generated group, which must
/// be finite within `budget`.
pub fn is_redundant(b: &ArrangementMatrix, i: usize, budget: usize) -> Result<bool> {
    let real = minimal_realization(b)?;
    if i >= real.len() {
        return Err(Error::IndexOutOfRange { index: i, len: real.len() });
    }
    let target = ReflectionPair::of(&real, i);
    let gens: Vec<ReflectionPair> = (0..real.len()).filter(|&k| k != i).map(|k| ReflectionPair::of(&real, k)).collect();
    if gens.is_empty() {
        return Ok(false);
    }
    if reflection_conjugates(&gens, budget)?.contains(&target) {
        return Ok(true);
    }
    let mats: Vec<Matrix> = (0..real.len()).filter(|&k| k != i).map(|k| real.reflection(k)).collect();
    enumerate_group(&mats, budget)?;
    Ok(false)
}

/// A rational multiple of π, kept modulo 2π.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PiFraction {
    num: i64,
    den: u64,
}

impl PiFraction {
    pub fn new(num: i64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        let g = num_integer::gcd(num.unsigned_abs(), den);
        let den = den / g;
        let num = (num / g as i64).rem_euclid(2 * den as i64);
        Ok(PiFraction { num, den })
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn two_cos(&self) -> ExactNumber {
        ExactNumber::two_cos(self.num, self.den)
    }

    fn combine(&self, a: i64, other: &Self, b: i64) -> Self {
        let den = num_integer::lcm(self.den, other.den);
        let x = a * self.num * (den / self.den) as i64 + b * other.num * (den / other.den) as i64;
        PiFraction::new(x, den).expect("non-zero denominator")
    }
}

impl std::fmt::Display for PiFraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}π/{}", self.num, self.den)
    }
}

/// The rank-two 3×3 matrix with off-diagonal entries 2cos α, 2cos β, 2cos(α−β).
pub fn degenerate_3x3(alpha: PiFraction, beta: PiFraction) -> ArrangementMatrix {
    let c = alpha.combine(1, &beta, -1);
    let (a, b, c) = (alpha.two_cos(), beta.two_cos(), c.two_cos());
    ArrangementMatrix::from_upper(3, |i, j| match (i, j) {
        (0, 1) => a.clone(),
        (0, 2) => b.clone(),
        _ => c.clone(),
    })
}

/// Parameters (α, β) with B = [`degenerate_3x3`](α, β) up to sign equivalence,
/// if B has that shape.
pub fn degenerate_3x3_params(b: &ArrangementMatrix, max_den: u64) -> Option<(PiFraction, PiFraction)> {
    if b.n() != 3 || !b.det().is_zero() {
        return None;
    }
    let angles = |x: &ExactNumber| -> Vec<PiFraction> {
        let mut out = Vec::new();
        for q in 1..=max_den {
            for p in 0..2 * q as i64 {
                if num_integer::gcd(p.unsigned_abs(), q) == 1 && ExactNumber::two_cos(p, q) == *x {
                    out.push(PiFraction::new(p, q).expect("q > 0"));
                }
            }
        }
        out
    };
    for alpha in angles(b.get(0, 1)) {
        for beta in angles(b.get(0, 2)) {
            if degenerate_3x3(alpha, beta).is_sign_equivalent(b) {
                return Some((alpha, beta));
            }
        }
        for beta in angles(&-b.get(0, 2)) {
            if degenerate_3x3(alpha, beta).is_sign_equivalent(b) {
                return Some((alpha, beta));
            }
        }
    }
    None
}

/// The braid generators on the parameters of [`degenerate_3x3`]:
/// σ_1 sends (α, β) to (α, α+β) and σ_2 sends (α, β) to (2α−β, α).
pub fn braid_on_params(alpha: PiFraction, beta: PiFraction, letter: Letter) -> Result<(PiFraction, PiFraction)> {
    Ok(match (letter.index, letter.inverse) {
        (1, false) => (alpha, alpha.combine(1, &beta, 1)),
        (1, true) => (alpha, beta.combine(1, &alpha, -1)),
        (2, false) => (alpha.combine(2, &beta, -1), alpha),
        (2, true) => (beta, beta.combine(2, &alpha, -1)),
        _ => return Err(Error::IndexOutOfRange { index: letter.index, len: 3 }),
    })
}

/// Whether the matrix-level braid action and the parameter map agree up to sign
/// equivalence for one letter.
pub fn params_match_action(alpha: PiFraction, beta: PiFraction, letter: Letter) -> Result<bool> {
    let b = degenerate_3x3(alpha, beta);
    let acted = act_sigma(&b, letter.index, letter.exponent())?;
    let (a2, b2) = braid_on_params(alpha, beta, letter)?;
    Ok(degenerate_3x3(a2, b2).is_sign_equivalent(&acted))
}

/// Word g r_s g^{−1} for reflections, written with 1-based indices.
pub fn conjugate_word(g: &[usize], s: usize) -> Vec<usize> {
    let mut w = g.to_vec();
    w.push(s);
    w.extend(g.iter().rev());
    w
}

/// A stated identity r_target = word in a degenerate extension.
#[derive(Clone, Debug)]
pub struct RedundancyCase {
    pub label: String,
    pub matrix: ArrangementMatrix,
    /// 1-based index of the reflection expressed through the others.
    pub target: usize,
    /// 1-based letters, multiplied left to right.
    pub word: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RedundancyOutcome {
    /// `None` when the word names an index outside the tuple.
    pub word_holds: Option<bool>,
    pub redundant: bool,
}

impl RedundancyOutcome {
    pub fn passed(&self) -> bool {
        self.word_holds == Some(true) || self.redundant
    }
}

impl RedundancyCase {
    pub fn check(&self, budget: usize) -> Result<RedundancyOutcome> {
        let real = minimal_realization(&self.matrix)?;
        let word_holds = match real.word_matrix(&self.word) {
            Ok(m) => Some(m == real.reflection(self.target - 1)),
            Err(Error::IndexOutOfRange { .. }) => None,
            Err(e) => return Err(e),
        };
        let redundant = word_holds == Some(true) || is_redundant(&self.matrix, self.target - 1, budget)?;
        Ok(RedundancyOutcome { word_holds, redundant })
    }
}

/// Degenerate extensions whose redundancy is stated with an explicit word.
pub fn known_redundancies() -> Result<Vec<RedundancyCase>> {
    use crate::catalog::ExtensionFamily as F;
    let mut out = Vec::new();
    let mut add = |family: F, target: usize, word: Vec<usize>| -> Result<()> {
        out.push(RedundancyCase { label: family.to_string(), matrix: family.matrix()?, target, word });
        Ok(())
    };
    for n in 2..=8 {
        add(F::ASigned { n, p: 1, q: 1 }, n + 1, vec![n, n - 1, n])?;
    }
    add(F::AChain { n: 8, k: 3 }, 5, conjugate_word(&[6, 9, 6, 7, 6, 8, 4, 6, 9, 6, 3, 7, 2, 8, 1, 6], 9))?;
    add(F::AChain { n: 8, k: 6 }, 6, conjugate_word(&[9, 1, 5, 2, 4, 9, 3, 1, 8, 2, 7], 9))?;
    add(F::AChain { n: 7, k: 4 }, 5, conjugate_word(&[8, 4, 3, 6, 2, 7, 1, 4], 9))?;
    for n in 3..=6 {
        for (p, q) in [(2, 0), (0, 2)] {
            add(F::BFirst { n, p, q }, n + 1, vec![n - 1, n, n - 2, n, n - 1])?;
        }
        add(F::BFirst { n, p: 1, q: 1 }, n + 1, vec![n - 2, n - 1, n - 2])?;
    }
    let g1 = [4, 1, 3, 1];
    let g2 = [1, 4];
    for (p, r) in [(0, vec![5]), (1, conjugate_word(&[4, 1], 5)), (2, conjugate_word(&[4, 1, 4], 5)), (3, conjugate_word(&[4], 5))] {
        let mut word = g1.to_vec();
        word.extend(&r);
        word.extend(conjugate_word(&g2, 1));
        word.extend(&r);
        word.extend(g1.iter().rev());
        add(F::BSecond { n: 4, p }, 2, word)?;
    }
    for n in 4..=7 {
        add(F::DExt { case: 1, n, p: 2, q: 0 }, n + 1, vec![n - 1, 1, n - 2, n, n - 2, 1, n - 1])?;
        add(F::DExt { case: 1, n, p: 1, q: 1 }, n + 1, vec![n - 1, n - 2, n - 1])?;
        add(F::DExt { case: 4, n, p: n - 3, q: 0 }, n + 1, vec![1, 2, n, 2, 1])?;
        add(F::DExt { case: 5, n, p: 0, q: 1 }, n + 1, vec![n - 1, n, n - 1])?;
        add(F::DExt { case: 5, n, p: 1, q: 0 }, n + 1, vec![n - 1, 1, n - 1])?;
    }
    let h_words: [(Vec<usize>, Vec<usize>); 7] = [
        (vec![], vec![8]),
        (vec![8, 1], vec![8]),
        (vec![], vec![5, 1, 4, 8, 3, 1, 2, 8]),
        (vec![8, 1], vec![6, 1, 5]),
        (vec![], vec![3, 1, 2, 8]),
        (vec![8, 1], vec![6, 1, 5, 8, 4, 1, 3]),
        (vec![], vec![]),
    ];
    for (p, (f, h)) in h_words.into_iter().enumerate() {
        let hr9 = conjugate_word(&h, 9);
        let mut g = vec![1];
        g.extend(&hr9);
        g.extend([2, 8, 3, 1, 4]);
        g.extend(&hr9);
        g.extend([5, 1, 6]);
        let mut outer = f.clone();
        outer.extend(&g);
        add(F::DExt { case: 2, n: 8, p, q: 0 }, 7, conjugate_word(&outer, 8))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(x: i64) -> ExactNumber {
        ExactNumber::from_int(x)
    }

    #[test]
    fn single_reflection() {
        let b = ArrangementMatrix::from_ints(&[&[2]]).unwrap();
        let r = unique_realization(&b).unwrap();
        assert_eq!(r.reflection(0), Matrix::from_ints(&[&[-1]]));
    }

    #[test]
    fn unique_rows_differ_from_identity_in_one_row() {
        let b = ArrangementMatrix::from_ints(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]).unwrap();
        let r = unique_realization(&b).unwrap();
        for j in 0..3 {
            let m = r.reflection(j);
            for a in 0..3 {
                for c in 0..3 {
                    let base = if a == c { int(1) } else { int(0) };
                    let want = if a == j { &base - b.get(j, c) } else { base };
                    assert_eq!(*m.get(a, c), want);
                }
            }
        }
    }

    #[test]
    fn singular_rejected_by_unique() {
        let b = ArrangementMatrix::from_ints(&[&[2, 2], &[2, 2]]).unwrap();
        assert_eq!(unique_realization(&b), Err(Error::Singular));
    }

    #[test]
    fn all_twos_minimal() {
        let b = ArrangementMatrix::from_ints(&[&[2, 2, 2], &[2, 2, 2], &[2, 2, 2]]).unwrap();
        let r = minimal_realization(&b).unwrap();
        assert_eq!(r.dim(), 1);
        for m in r.reflections() {
            assert_eq!(m, Matrix::from_ints(&[&[-1]]));
        }
        assert!(is_redundant(&b, 2, 100).unwrap());
        assert_eq!(quasicox_degenerate(&b, &r).unwrap(), Matrix::from_ints(&[&[-1]]));
    }

    #[test]
    fn a3_not_redundant() {
        let b = ArrangementMatrix::from_ints(&[&[2, 1, 1], &[1, 2, 1], &[1, 1, 2]]).unwrap();
        for i in 0..3 {
            assert!(!is_redundant(&b, i, 1000).unwrap());
        }
    }

    #[test]
    fn pi_fraction_reduces_mod_two_pi() {
        let a = PiFraction::new(-1, 3).unwrap();
        assert_eq!((a.num(), a.den()), (5, 3));
        let b = PiFraction::new(4, 2).unwrap();
        assert_eq!((b.num(), b.den()), (0, 1));
    }

    #[test]
    fn first_generator_on_params() {
        let a = PiFraction::new(1, 3).unwrap();
        let b = PiFraction::new(1, 5).unwrap();
        let (x, y) = braid_on_params(a, b, Letter::new(1, 1).unwrap()).unwrap();
        assert_eq!((x, y), (a, PiFraction::new(8, 15).unwrap()));
    }
}
