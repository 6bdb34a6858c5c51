//! Symmetric arrangement matrices B_{ij} = v_i^∨(v_j) with diagonal 2.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::exact_number::ExactNumber;
use crate::matrix::Matrix;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ArrangementMatrix {
    n: usize,
    entries: Vec<ExactNumber>,
}

/// Sign vector λ with λ_1 = +1, acting by B ↦ diag(λ) B diag(λ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.first().is_some_and(|&s| s != 1) || signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Invalid("sign vector must be ±1 with first entry +1".into()));
        }
        Ok(SignVector(signs))
    }

    /// The sign vector encoded by bit k of `mask` for index k+1.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        SignVector(
            (0..n).map(|i| if i > 0 && (mask >> (i - 1)) & 1 == 1 { -1 } else { 1 }).collect(),
        )
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }
}

impl ArrangementMatrix {
    pub fn new(n: usize, entries: Vec<ExactNumber>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Dimension(format!("expected {} entries, got {}", n * n, entries.len())));
        }
        let two = ExactNumber::from_int(2);
        for i in 0..n {
            if entries[i * n + i] != two {
                return Err(Error::BadDiagonal(i));
            }
            for j in i + 1..n {
                if entries[i * n + j] != entries[j * n + i] {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        Ok(ArrangementMatrix { n, entries })
    }

    pub fn from_rows(rows: Vec<Vec<ExactNumber>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("matrix must be square".into()));
        }
        Self::new(n, rows.into_iter().flatten().collect())
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| ExactNumber::from_int(x)).collect()).collect())
    }

    /// Builds the matrix with diagonal 2 and upper entries given by `f(i, j)`, i < j.
    pub fn from_upper(n: usize, mut f: impl FnMut(usize, usize) -> ExactNumber) -> Self {
        let mut entries = vec![ExactNumber::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = ExactNumber::from_int(2);
            for j in i + 1..n {
                let v = f(i, j);
                entries[j * n + i] = v.clone();
                entries[i * n + j] = v;
            }
        }
        ArrangementMatrix { n, entries }
    }

    pub fn from_matrix(m: &Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension("matrix must be square".into()));
        }
        Self::new(m.rows(), m.data().to_vec())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &ExactNumber {
        &self.entries[i * self.n + j]
    }

    pub(crate) fn set_sym(&mut self, i: usize, j: usize, v: ExactNumber) {
        let n = self.n;
        self.entries[j * n + i] = v.clone();
        self.entries[i * n + j] = v;
    }

    pub fn entries(&self) -> &[ExactNumber] {
        &self.entries
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::new(self.n, self.n, self.entries.clone())
    }

    pub fn to_rows(&self) -> Vec<Vec<ExactNumber>> {
        (0..self.n).map(|i| self.entries[i * self.n..(i + 1) * self.n].to_vec()).collect()
    }

    pub fn sign_conjugate(&self, lambda: &SignVector) -> Self {
        let s = lambda.signs();
        Self::from_upper(self.n, |i, j| if s[i] * s[j] < 0 { -self.get(i, j) } else { self.get(i, j).clone() })
    }

    /// Reindexing: entry (p, q) of the result is entry (order[p], order[q]).
    pub fn permuted(&self, order: &[usize]) -> Self {
        Self::from_upper(self.n, |p, q| self.get(order[p], order[q]).clone())
    }

    pub fn principal_minor(&self, idx: &[usize]) -> Self {
        Self::from_upper(idx.len(), |p, q| self.get(idx[p], idx[q]).clone())
    }

    /// Sign vector realizing the lexicographically minimal conjugate.
    pub fn canonical_signs(&self) -> SignVector {
        let n = self.n;
        if n <= 1 {
            return SignVector(vec![1; n]);
        }
        // For each upper entry: +1 if the entry precedes its negation, −1 if it
        // follows it, 0 for zero entries. Conjugates compare entrywise by
        // whether the preferred sign was kept, so only signs matter.
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let e = self.get(i, j);
                if !e.is_zero() {
                    let pref = if *e < -e { 1i8 } else { -1 };
                    pairs.push((i, j, pref));
                }
            }
        }
        let words = pairs.len().div_ceil(64).max(1);
        let mut best: Option<(Vec<u64>, u64)> = None;
        let mut key = vec![0u64; words];
        for mask in 0u64..(1u64 << (n - 1)) {
            key.iter_mut().for_each(|w| *w = 0);
            let sign = |k: usize| if k > 0 && (mask >> (k - 1)) & 1 == 1 { -1i8 } else { 1 };
            for (t, &(i, j, pref)) in pairs.iter().enumerate() {
                if sign(i) * sign(j) != pref {
                    key[t / 64] |= 1u64 << (63 - t % 64);
                }
            }
            if best.as_ref().is_none_or(|(b, _)| key < *b) {
                best = Some((key.clone(), mask));
            }
        }
        SignVector::from_mask(n, best.expect("at least one mask").1)
    }

    /// The lexicographically minimal matrix in the sign-equivalence class.
    pub fn sign_canonical(&self) -> Self {
        self.sign_conjugate(&self.canonical_signs())
    }

    /// Byte key of this exact matrix (upper triangle, row-major).
    pub fn key(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(&(self.n as u32).to_be_bytes());
        for i in 0..self.n {
            for j in i + 1..self.n {
                self.get(i, j).write_key(&mut out);
            }
        }
        out
    }

    /// Byte key of the sign-equivalence class.
    pub fn canonical_key(&self) -> Vec<u8> {
        self.sign_canonical().key()
    }

    pub fn is_sign_equivalent(&self, other: &Self) -> bool {
        self.n == other.n && self.sign_canonical() == other.sign_canonical()
    }

    /// Connected components of the graph with an edge wherever B_{ij} ≠ 0.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n;
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            let mut members = Vec::new();
            comp[s] = id;
            while let Some(v) = stack.pop() {
                members.push(v);
                for w in 0..n {
                    if w != v && comp[w] == usize::MAX && !self.get(v, w).is_zero() {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// The vertex partition when the graph is disconnected.
    pub fn is_decomposable(&self) -> Option<Vec<Vec<usize>>> {
        let c = self.components();
        (c.len() > 1).then_some(c)
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|i| (i + 1..self.n).filter(|&j| !self.get(i, j).is_zero()).count()).sum()
    }

    pub fn is_tree(&self) -> bool {
        self.n > 0 && self.components().len() == 1 && self.edge_count() == self.n - 1
    }

    pub fn det_rank(&self) -> (ExactNumber, usize) {
        let m = self.to_matrix();
        (m.det(), m.rank())
    }

    pub fn det(&self) -> ExactNumber {
        self.to_matrix().det()
    }

    pub fn rank(&self) -> usize {
        self.to_matrix().rank()
    }

    /// Chain of principal minors B_n ⊃ … ⊃ B_1, each step deleting the index
    /// that keeps the rank maximal (smallest index on ties).
    pub fn minor_chain(&self) -> MinorChain {
        let mut current: Vec<usize> = (0..self.n).collect();
        let mut sets = vec![current.clone()];
        let mut ranks = vec![self.rank()];
        while current.len() > 1 {
            let mut best: Option<(usize, usize)> = None;
            for pos in 0..current.len() {
                let mut idx = current.clone();
                idx.remove(pos);
                let r = self.principal_minor(&idx).rank();
                if best.is_none_or(|(br, _)| r > br) {
                    best = Some((r, pos));
                }
            }
            let (r, pos) = best.expect("non-empty index set");
            current.remove(pos);
            sets.push(current.clone());
            ranks.push(r);
        }
        sets.reverse();
        ranks.reverse();
        MinorChain { index_sets: sets, nondegenerate_sizes: ranks }
    }

    pub fn to_graph(&self) -> LabeledGraph {
        let mut edges = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                let e = self.get(i, j);
                if !e.is_zero() {
                    edges.push(GraphEdge { i, j, label: EdgeLabel::of(e) });
                }
            }
        }
        LabeledGraph { vertices: self.n, edges }
    }

    pub fn from_graph(g: &LabeledGraph) -> Result<Self> {
        let mut m = Self::from_upper(g.vertices, |_, _| ExactNumber::zero());
        for e in &g.edges {
            if e.i >= g.vertices || e.j >= g.vertices || e.i == e.j {
                return Err(Error::InvalidLabel(format!("bad edge ({}, {})", e.i, e.j)));
            }
            m.set_sym(e.i, e.j, e.label.value()?);
        }
        Ok(m)
    }

    pub fn to_dot(&self) -> String {
        self.to_graph().to_dot()
    }

    pub fn to_file(&self) -> MatrixFile {
        MatrixFile {
            n: self.n,
            entries: self.to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect(),
        }
    }

    pub fn from_file(f: &MatrixFile) -> Result<Self> {
        if f.entries.len() != f.n {
            return Err(Error::Dimension(format!("n = {} but {} rows", f.n, f.entries.len())));
        }
        let rows = f
            .entries
            .iter()
            .map(|r| r.iter().map(|s| ExactNumber::parse(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_file()).expect("matrix file serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let f: MatrixFile = serde_json::from_str(s).map_err(|e| Error::Invalid(e.to_string()))?;
        Self::from_file(&f)
    }
}

impl fmt::Debug for ArrangementMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.to_matrix(), f)
    }
}

/// On-disk matrix format: {"n": int, "entries": [[expr, …], …]}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub n: usize,
    pub entries: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorChain {
    /// Index sets of B_1, …, B_n (B_n is the full index set).
    pub index_sets: Vec<Vec<usize>>,
    /// Size of the largest non-degenerate principal minor of each B_i (its rank, for symmetric B).
    pub nondegenerate_sizes: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeLabel {
    /// Entry ±2cos(πk/n) with 0 < k/n < 1/2, k/n in lowest terms.
    Cos { negative: bool, n: u64, k: u64 },
    Raw(ExactNumber),
}

impl EdgeLabel {
    pub fn of(e: &ExactNumber) -> Self {
        match cos_form(e) {
            Some((negative, n, k)) => EdgeLabel::Cos { negative, n, k },
            None => EdgeLabel::Raw(e.clone()),
        }
    }

    pub fn value(&self) -> Result<ExactNumber> {
        match self {
            EdgeLabel::Cos { negative, n, k } => {
                if *k == 0 || 2 * k >= *n {
                    return Err(Error::InvalidLabel(format!("{n}/{k}: need 0 < k/n < 1/2")));
                }
                let v = ExactNumber::two_cos(*k as i64, *n);
                Ok(if *negative { -v } else { v })
            }
            EdgeLabel::Raw(v) => Ok(v.clone()),
        }
    }

    /// Text label: 3 omitted, 5/2 written 5′, sign shown only when negative.
    pub fn render(&self) -> String {
        match self {
            EdgeLabel::Cos { negative, n, k } => {
                let body = match (n, k) {
                    (3, 1) => String::new(),
                    (5, 2) => "5′".to_string(),
                    (n, 1) => n.to_string(),
                    (n, k) => format!("{n}/{k}"),
                };
                if *negative { format!("-{body}") } else { body }
            }
            EdgeLabel::Raw(v) => v.to_string(),
        }
    }

    /// Inverse of [`EdgeLabel::render`] for the ±n/k forms.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        let (negative, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t),
        };
        let (n, k) = if body.is_empty() {
            (3, 1)
        } else if body == "5′" || body == "5'" {
            (5, 2)
        } else if let Some((a, b)) = body.split_once('/') {
            let n = a.parse::<u64>().map_err(|_| Error::InvalidLabel(s.into()))?;
            let k = b.parse::<u64>().map_err(|_| Error::InvalidLabel(s.into()))?;
            (n, k)
        } else {
            (body.parse::<u64>().map_err(|_| Error::InvalidLabel(s.into()))?, 1)
        };
        if k == 0 || 2 * k >= n || gcd(n, k) != 1 {
            return Err(Error::InvalidLabel(format!("{s}: need 0 < k/n < 1/2 in lowest terms")));
        }
        Ok(EdgeLabel::Cos { negative, n, k })
    }
}

/// Recognizes e = ±2cos(πk/n) with 0 < k/n < 1/2 and n ≤ 1000.
fn cos_form(e: &ExactNumber) -> Option<(bool, u64, u64)> {
    if e.is_zero() || !e.is_real() {
        return None;
    }
    let f = e.to_f64();
    let negative = f < 0.0;
    let a = f.abs() / 2.0;
    if !(a > 0.0 && a < 1.0) {
        return None;
    }
    let t = a.acos() / std::f64::consts::PI;
    let mag = if negative { -e } else { e.clone() };
    for n in 3..=1000u64 {
        let k = (t * n as f64).round() as u64;
        if k == 0 || 2 * k >= n || gcd(n, k) != 1 || (k as f64 / n as f64 - t).abs() > 1e-9 {
            continue;
        }
        if ExactNumber::two_cos(k as i64, n) == mag {
            return Some((negative, n, k));
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphEdge {
    pub i: usize,
    pub j: usize,
    pub label: EdgeLabel,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    pub vertices: usize,
    pub edges: Vec<GraphEdge>,
}

impl LabeledGraph {
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph arrangement {\n");
        for v in 0..self.vertices {
            s.push_str(&format!("  {};\n", v + 1));
        }
        for e in &self.edges {
            let label = e.label.render();
            if label.is_empty() {
                s.push_str(&format!("  {} -- {};\n", e.i + 1, e.j + 1));
            } else {
                s.push_str(&format!("  {} -- {} [label=\"{}\"];\n", e.i + 1, e.j + 1, label));
            }
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> ArrangementMatrix {
        ArrangementMatrix::from_ints(rows).unwrap()
    }

    #[test]
    fn construction_validates() {
        assert!(matches!(ArrangementMatrix::from_ints(&[&[2, 1], &[0, 2]]), Err(Error::NotSymmetric(0, 1))));
        assert!(matches!(ArrangementMatrix::from_ints(&[&[2, 1], &[1, 3]]), Err(Error::BadDiagonal(1))));
    }

    #[test]
    fn sign_canonical_examples() {
        let a3 = m(&[&[2, 1, 1], &[1, 2, 1], &[1, 1, 2]]);
        assert_eq!(a3.sign_canonical(), a3);
        let tree = m(&[&[2, -1, 0], &[-1, 2, 1], &[0, 1, 2]]);
        assert_eq!(tree.sign_canonical(), m(&[&[2, 1, 0], &[1, 2, 1], &[0, 1, 2]]));
        let cyc = m(&[&[2, -1, -1], &[-1, 2, -1], &[-1, -1, 2]]).sign_canonical();
        let negs = [(0, 1), (0, 2), (1, 2)].iter().filter(|&&(i, j)| cyc.get(i, j).to_f64() < 0.0).count();
        assert_eq!(negs, 1);
    }

    #[test]
    fn graph_labels() {
        let a2 = m(&[&[2, 1], &[1, 2]]);
        let g = a2.to_graph();
        assert_eq!(g.edges.len(), 1);
        assert_eq!(g.edges[0].label.render(), "");
        let five = ArrangementMatrix::from_upper(2, |_, _| ExactNumber::two_cos(2, 5));
        assert_eq!(five.to_graph().edges[0].label.render(), "5′");
        let neg4 = ArrangementMatrix::from_upper(2, |_, _| -ExactNumber::two_cos(1, 4));
        assert_eq!(neg4.to_graph().edges[0].label.render(), "-4");
        assert_eq!(ArrangementMatrix::from_graph(&neg4.to_graph()).unwrap(), neg4);
        let zero = m(&[&[2, 0], &[0, 2]]);
        assert!(zero.to_graph().edges.is_empty());
        let bad = LabeledGraph {
            vertices: 2,
            edges: vec![GraphEdge { i: 0, j: 1, label: EdgeLabel::Cos { negative: false, n: 4, k: 2 } }],
        };
        assert!(ArrangementMatrix::from_graph(&bad).is_err());
        assert!(EdgeLabel::parse("6/3").is_err());
        assert_eq!(EdgeLabel::parse("-5'").unwrap(), EdgeLabel::Cos { negative: true, n: 5, k: 2 });
    }

    #[test]
    fn decomposability() {
        let block = m(&[&[2, 1, 0, 0], &[1, 2, 0, 0], &[0, 0, 2, 1], &[0, 0, 1, 2]]);
        assert_eq!(block.is_decomposable(), Some(vec![vec![0, 1], vec![2, 3]]));
        assert_eq!(m(&[&[2, 1, 1], &[1, 2, 1], &[1, 1, 2]]).is_decomposable(), None);
        assert_eq!(m(&[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2]]).is_decomposable().unwrap().len(), 3);
    }

    #[test]
    fn det_rank_and_minor_chain() {
        let a3 = m(&[&[2, 1, 1], &[1, 2, 1], &[1, 1, 2]]);
        assert_eq!(a3.det_rank(), (ExactNumber::from_int(4), 3));
        let twos = m(&[&[2, 2, 2], &[2, 2, 2], &[2, 2, 2]]);
        assert_eq!(twos.det_rank(), (ExactNumber::zero(), 1));
        assert_eq!(twos.minor_chain().nondegenerate_sizes, vec![1, 1, 1]);
        let a4 = ArrangementMatrix::from_upper(4, |_, _| ExactNumber::one());
        assert_eq!(a4.minor_chain().nondegenerate_sizes, vec![1, 2, 3, 4]);
        let neg = m(&[&[2, -2, -2], &[-2, 2, -2], &[-2, -2, 2]]);
        assert_eq!(neg.minor_chain().nondegenerate_sizes, vec![1, 1, 3]);
    }

    #[test]
    fn matrix_file_round_trip() {
        let b = ArrangementMatrix::from_upper(3, |i, j| ExactNumber::two_cos((i + j) as i64, 5));
        let text = serde_json::to_string(&b.to_file()).unwrap();
        assert_eq!(ArrangementMatrix::from_json_str(&text).unwrap(), b);
    }
}
