//! Permutation models of the reflection groups of types A, B and D.
//!
//! W(A_n) is the symmetric group on n+1 letters with transpositions as
//! reflections. W(B_n) and W(D_n) act on ±ε_1, …, ±ε_n by signed permutations.
//! A tuple of reflections is drawn as a graph whose vertices are the letters
//! (or the pairs {ε_i, −ε_i}) and whose numbered edges are the transpositions.

use std::fmt;

use crate::braid_action::{hurwitz_in_place, BraidWord, GroupElement, Letter};
use crate::error::{Error, Result};
use crate::exact_number::ExactNumber;
use crate::perm::Permutation;

/// ε_i ↦ signs[i]·ε_{images[i]}.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SignedPermutation {
    images: Vec<u32>,
    signs: Vec<i8>,
}

impl SignedPermutation {
    pub fn identity(n: usize) -> Self {
        SignedPermutation { images: (0..n as u32).collect(), signs: vec![1; n] }
    }

    pub fn new(images: Vec<u32>, signs: Vec<i8>) -> Result<Self> {
        if images.len() != signs.len() || signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Invalid("signs must be ±1, one per letter".into()));
        }
        Permutation::from_images(images.clone())?;
        Ok(SignedPermutation { images, signs })
    }

    /// ε_a ↔ ε_b, or ε_a ↔ −ε_b when `flip` is set.
    pub fn transposition(n: usize, a: usize, b: usize, flip: bool) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(a, b);
        if flip {
            p.signs[a] = -1;
            p.signs[b] = -1;
        }
        p
    }

    /// ε_a ↦ −ε_a.
    pub fn sign_change(n: usize, a: usize) -> Self {
        let mut p = Self::identity(n);
        p.signs[a] = -1;
        p
    }

    /// The reflection along a root of the form ±ε_a or ±ε_a ± ε_b.
    pub fn from_root(root: &[ExactNumber]) -> Result<Self> {
        let n = root.len();
        let support: Vec<usize> = (0..n).filter(|&i| !root[i].is_zero()).collect();
        match support[..] {
            [a] => Ok(Self::sign_change(n, a)),
            [a, b] if root[a] == root[b] || root[a] == -&root[b] => {
                Ok(Self::transposition(n, a, b, root[a] == root[b]))
            }
            _ => Err(Error::Invalid("root is not of the form ±ε_a or ±ε_a ± ε_b".into())),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// Image of sign·ε_i as (sign′, j) meaning sign′·ε_j.
    pub fn apply(&self, i: usize, sign: i8) -> (i8, usize) {
        (sign * self.signs[i], self.images[i] as usize)
    }

    /// self ∘ other: other is applied first.
    pub fn compose(&self, other: &Self) -> Self {
        let (images, signs) = (0..self.len())
            .map(|i| {
                let j = other.images[i] as usize;
                (self.images[j], other.signs[i] * self.signs[j])
            })
            .unzip();
        SignedPermutation { images, signs }
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.len()];
        let mut signs = vec![1; self.len()];
        for i in 0..self.len() {
            let j = self.images[i] as usize;
            images[j] = i as u32;
            signs[j] = self.signs[i];
        }
        SignedPermutation { images, signs }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j as usize) && self.signs.iter().all(|&s| s == 1)
    }

    /// The induced permutation of the pairs {ε_i, −ε_i}.
    pub fn underlying(&self) -> Permutation {
        Permutation::from_images(self.images.clone()).expect("images form a bijection")
    }

    /// A transposition of two letters, with or without sign change.
    pub fn is_transposition_class(&self) -> bool {
        self.transposition_letters().is_some()
    }

    /// A single sign change.
    pub fn is_sign_class(&self) -> bool {
        self.sign_letter().is_some()
    }

    fn transposition_letters(&self) -> Option<(usize, usize, bool)> {
        let moved: Vec<usize> = (0..self.len()).filter(|&i| self.images[i] as usize != i).collect();
        match moved[..] {
            [a, b] if self.signs[a] == self.signs[b]
                && (0..self.len()).all(|i| i == a || i == b || self.signs[i] == 1) =>
            {
                Some((a, b, self.signs[a] == -1))
            }
            _ => None,
        }
    }

    fn sign_letter(&self) -> Option<usize> {
        if (0..self.len()).any(|i| self.images[i] as usize != i) {
            return None;
        }
        let neg: Vec<usize> = (0..self.len()).filter(|&i| self.signs[i] == -1).collect();
        match neg[..] {
            [a] => Some(a),
            _ => None,
        }
    }
}

impl GroupElement for SignedPermutation {
    fn compose(&self, other: &Self) -> Self {
        SignedPermutation::compose(self, other)
    }

    fn inverse(&self) -> Self {
        SignedPermutation::inverse(self)
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.len())
            .map(|i| {
                let s = if self.signs[i] < 0 { "-" } else { "" };
                format!("{}->{s}{}", i + 1, self.images[i] + 1)
            })
            .collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// One generator drawn in a permutation graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphItem {
    /// A transposition of two vertices; `signed` marks ε_a ↔ −ε_b.
    Edge { a: usize, b: usize, signed: bool },
    /// A sign change at one vertex.
    Marked(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGraph {
    vertices: usize,
    items: Vec<GraphItem>,
}

struct UnionFind {
    parent: Vec<usize>,
    /// Parity of the path to the parent.
    parity: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), parity: vec![0; n] }
    }

    fn find(&mut self, x: usize) -> (usize, u8) {
        let p = self.parent[x];
        if p == x {
            return (x, 0);
        }
        let (root, par) = self.find(p);
        self.parent[x] = root;
        self.parity[x] ^= par;
        (root, self.parity[x])
    }

    /// Joins with the constraint parity(a) ⊕ parity(b) = `rel`; false on a contradiction.
    fn union(&mut self, a: usize, b: usize, rel: u8) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return pa ^ pb == rel;
        }
        self.parent[ra] = rb;
        self.parity[ra] = pa ^ pb ^ rel;
        true
    }
}

impl PermGraph {
    pub fn new(vertices: usize, items: Vec<GraphItem>) -> Result<Self> {
        for it in &items {
            let ok = match *it {
                GraphItem::Edge { a, b, .. } => a != b && a < vertices && b < vertices,
                GraphItem::Marked(v) => v < vertices,
            };
            if !ok {
                return Err(Error::Invalid(format!("bad graph item {it:?}")));
            }
        }
        Ok(PermGraph { vertices, items })
    }

    /// The graph of a tuple of transpositions.
    pub fn from_transpositions(t: &[Permutation]) -> Result<Self> {
        let n = t.first().map_or(0, |p| p.len());
        let items = t
            .iter()
            .map(|p| match p.cycles()[..] {
                [ref c] if c.len() == 2 && p.len() == n => Ok(GraphItem::Edge { a: c[0], b: c[1], signed: false }),
                _ => Err(Error::Invalid(format!("{p} is not a transposition on {n} letters"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, items)
    }

    /// The graph of a tuple of signed reflections.
    pub fn from_signed(t: &[SignedPermutation]) -> Result<Self> {
        let n = t.first().map_or(0, |p| p.len());
        let items = t
            .iter()
            .map(|p| {
                if p.len() != n {
                    Err(Error::Dimension("signed permutations of different sizes".into()))
                } else if let Some((a, b, signed)) = p.transposition_letters() {
                    Ok(GraphItem::Edge { a, b, signed })
                } else if let Some(a) = p.sign_letter() {
                    Ok(GraphItem::Marked(a))
                } else {
                    Err(Error::Invalid(format!("{p} is not a reflection")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, items)
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn items(&self) -> &[GraphItem] {
        &self.items
    }

    pub fn edge_count(&self) -> usize {
        self.items.iter().filter(|i| matches!(i, GraphItem::Edge { .. })).count()
    }

    pub fn marked(&self) -> Vec<usize> {
        self.items.iter().filter_map(|i| if let GraphItem::Marked(v) = i { Some(*v) } else { None }).collect()
    }

    pub fn is_connected(&self) -> bool {
        let mut uf = UnionFind::new(self.vertices);
        for it in &self.items {
            if let GraphItem::Edge { a, b, .. } = *it {
                uf.union(a, b, 0);
            }
        }
        let roots: std::collections::HashSet<usize> = (0..self.vertices).map(|v| uf.find(v).0).collect();
        roots.len() <= 1
    }

    pub fn is_tree(&self) -> bool {
        self.edge_count() + 1 == self.vertices && self.is_connected()
    }

    /// Pairs of edge positions joining the same two vertices.
    pub fn double_edges(&self) -> Vec<(usize, usize)> {
        let ends: Vec<Option<(usize, usize)>> = self
            .items
            .iter()
            .map(|i| match *i {
                GraphItem::Edge { a, b, .. } => Some((a.min(b), a.max(b))),
                GraphItem::Marked(_) => None,
            })
            .collect();
        let mut out = Vec::new();
        for x in 0..ends.len() {
            for y in x + 1..ends.len() {
                if ends[x].is_some() && ends[x] == ends[y] {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Whether some cycle carries an odd number of signed edges, so no change of
    /// basis directions removes all signs.
    pub fn has_odd_cycle(&self) -> bool {
        let mut uf = UnionFind::new(self.vertices);
        self.items.iter().any(|it| match *it {
            GraphItem::Edge { a, b, signed } => !uf.union(a, b, signed as u8),
            GraphItem::Marked(_) => false,
        })
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph {\n");
        for (k, it) in self.items.iter().enumerate() {
            match *it {
                GraphItem::Edge { a, b, signed } => {
                    let style = if signed { ", style=dashed" } else { "" };
                    s += &format!("  {} -- {} [label=\"{}\"{style}];\n", a + 1, b + 1, k + 1);
                }
                GraphItem::Marked(v) => s += &format!("  {} [xlabel=\"{}\", shape=box];\n", v + 1, k + 1),
            }
        }
        s + "}\n"
    }
}

/// Whether transpositions generate the full symmetric group on their letters.
pub fn generates_full_symmetric(t: &[Permutation]) -> Result<bool> {
    Ok(PermGraph::from_transpositions(t)?.is_connected())
}

/// Whether signed reflections generate W(B_n): connected, with a sign change.
pub fn generates_bn(t: &[SignedPermutation]) -> Result<bool> {
    let g = PermGraph::from_signed(t)?;
    Ok(g.is_connected() && !g.marked().is_empty())
}

/// Whether signed transpositions generate W(D_n).
pub fn generates_dn(t: &[SignedPermutation]) -> Result<bool> {
    let g = PermGraph::from_signed(t)?;
    Ok(g.marked().is_empty() && g.is_connected() && g.has_odd_cycle())
}

fn product<G: GroupElement>(t: &[G]) -> Option<G> {
    let (first, rest) = t.split_first()?;
    Some(rest.iter().fold(first.clone(), |acc, g| acc.compose(g)))
}

/// Whether the ordered product of n generating transpositions of S_{n+1} is a
/// single (n+1)-cycle.
pub fn product_cycle_check(t: &[Permutation]) -> Result<bool> {
    if !generates_full_symmetric(t)? {
        return Err(Error::Precondition("transpositions do not generate the symmetric group".into()));
    }
    let Some(p) = product(t) else { return Ok(true) };
    Ok(p.cycle_type() == vec![p.len()])
}

fn shares(a: &Permutation, b: &Permutation) -> Option<usize> {
    let x = a.cycles().pop()?;
    let y = b.cycles().pop()?;
    x.iter().copied().find(|v| y.contains(v))
}

/// Path a_1, a_2, … of a tuple whose k-th transposition is (a_k a_{k+1}).
pub fn chain_vertices(t: &[Permutation]) -> Option<Vec<usize>> {
    let edges: Vec<Vec<usize>> = t.iter().map(|p| p.cycles().pop()).collect::<Option<_>>()?;
    if edges.iter().any(|e| e.len() != 2) {
        return None;
    }
    let Some(first) = edges.first() else { return Some(Vec::new()) };
    let start = match edges.get(1) {
        Some(e) if e.contains(&first[1]) => first[0],
        Some(e) if e.contains(&first[0]) => first[1],
        Some(_) => return None,
        None => first[0],
    };
    let mut path = vec![start];
    for e in &edges {
        let last = *path.last().expect("path is non-empty");
        let next = if e[0] == last { e[1] } else if e[1] == last { e[0] } else { return None };
        if path.contains(&next) {
            return None;
        }
        path.push(next);
    }
    Some(path)
}

/// A braid word bringing a generating tuple of n transpositions on n+1 letters
/// to a linear chain (a_1 a_2), (a_2 a_3), …, (a_n a_{n+1}).
///
/// The chain is grown one edge at a time: an edge meeting the current path is
/// moved to the front of the unprocessed part, then moved left until it sits
/// just after the path edge ending at its attaching vertex.
pub fn canonical_reduce_a(t: &[Permutation]) -> Result<BraidWord> {
    let graph = PermGraph::from_transpositions(t)?;
    if !graph.is_tree() {
        return Err(Error::Precondition("tuple is not a minimal generating set of the symmetric group".into()));
    }
    let mut cur = t.to_vec();
    let mut applied: Vec<Letter> = Vec::new();
    let mut step = |cur: &mut Vec<Permutation>, pos: usize| {
        hurwitz_in_place(cur, pos, true);
        applied.push(Letter { index: pos + 1, inverse: true });
    };
    for m in 1..cur.len() {
        let path = chain_vertices(&cur[..m]).expect("processed prefix is a chain");
        let k = (m..cur.len())
            .find(|&k| cur[k].cycles()[0].iter().any(|v| path.contains(v)))
            .expect("a tree has an edge leaving the path");
        for p in (m..k).rev() {
            step(&mut cur, p);
        }
        let attach = cur[m].cycles()[0].iter().copied().find(|v| path.contains(v)).expect("edge meets the path");
        let x = path.iter().position(|&v| v == attach).expect("vertex on the path");
        if m == 1 && x == 0 {
            continue;
        }
        for p in (x..m).rev() {
            step(&mut cur, p);
        }
    }
    if chain_vertices(&cur).is_none() {
        return Err(Error::Invalid("reduction did not reach a chain".into()));
    }
    debug_assert!(cur.windows(2).all(|w| shares(&w[0], &w[1]).is_some()));
    Ok(BraidWord::from_applied(&applied))
}

/// The cycle lengths {k, n−k} of the ordered product acting on the pairs
/// {ε_i, −ε_i}, for a tuple generating W(D_n).
pub fn dn_invariant(t: &[SignedPermutation]) -> Result<(usize, usize)> {
    if !generates_dn(t)? {
        return Err(Error::Precondition("tuple does not generate W(D_n)".into()));
    }
    let p = product(t).expect("generating tuple is non-empty").underlying();
    match p.cycle_type()[..] {
        [a, b] => Ok((a.min(b), a.max(b))),
        ref other => Err(Error::Invalid(format!("product has cycle type {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid_action::hurwitz_word;

    fn tr(n: usize, a: usize, b: usize) -> Permutation {
        Permutation::transposition(n, a - 1, b - 1)
    }

    #[test]
    fn connectivity_examples() {
        assert!(generates_full_symmetric(&[tr(4, 1, 2), tr(4, 2, 3), tr(4, 3, 4)]).unwrap());
        assert!(!generates_full_symmetric(&[tr(4, 1, 2), tr(4, 1, 2), tr(4, 3, 4)]).unwrap());
        assert!(generates_full_symmetric(&[tr(4, 1, 2), tr(4, 1, 3), tr(4, 1, 4)]).unwrap());
    }

    #[test]
    fn chain_product_is_a_cycle() {
        assert!(product_cycle_check(&[tr(4, 1, 2), tr(4, 2, 3), tr(4, 3, 4)]).unwrap());
        assert!(product_cycle_check(&[tr(4, 1, 2), tr(4, 3, 4)]).is_err());
    }

    #[test]
    fn reduce_two_edges() {
        let t = vec![tr(3, 2, 3), tr(3, 1, 2)];
        let w = canonical_reduce_a(&t).unwrap();
        let out = hurwitz_word(&t, &w).unwrap();
        assert!(chain_vertices(&out).is_some());
    }

    #[test]
    fn canonical_chain_needs_nothing() {
        let t = vec![tr(4, 1, 2), tr(4, 2, 3), tr(4, 3, 4)];
        assert!(canonical_reduce_a(&t).unwrap().is_empty());
    }

    #[test]
    fn signed_roundtrip() {
        let p = SignedPermutation::transposition(4, 0, 2, true);
        assert!(p.compose(&p).is_identity());
        assert_eq!(p.inverse(), p);
        let q = SignedPermutation::sign_change(4, 1);
        assert!(q.is_sign_class() && !q.is_transposition_class());
        let r = p.compose(&q);
        assert!(r.compose(&r.inverse()).is_identity());
    }

    #[test]
    fn d4_invariants() {
        let n = 4;
        let chain: Vec<SignedPermutation> = (0..n - 1).map(|i| SignedPermutation::transposition(n, i, i + 1, false)).collect();
        let mut one = chain.clone();
        one.push(SignedPermutation::transposition(n, 2, 3, true));
        let mut two = chain;
        two.push(SignedPermutation::transposition(n, 1, 3, true));
        let a = dn_invariant(&one).unwrap();
        let b = dn_invariant(&two).unwrap();
        assert_ne!(a, b);
        assert!([a, b].contains(&(1, 3)) && [a, b].contains(&(2, 2)));
    }
}
