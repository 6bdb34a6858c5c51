//! Braid group action on arrangement matrices, tuples and Stokes matrices.
//!
//! Words act on the left: for a word `uv`, `v` is applied first.

use std::fmt;
use std::str::FromStr;

use crate::arrangement::ArrangementMatrix;
use crate::error::{Error, Result};
use crate::exact_number::ExactNumber;
use crate::matrix::Matrix;
use crate::perm::Permutation;

/// A generator σ_index (1-based) or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub index: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(index: usize, exponent: i8) -> Result<Self> {
        if index == 0 {
            return Err(Error::Invalid("generator indices start at 1".into()));
        }
        match exponent {
            1 => Ok(Letter { index, inverse: false }),
            -1 => Ok(Letter { index, inverse: true }),
            _ => Err(Error::Invalid(format!("exponent must be ±1, got {exponent}"))),
        }
    }

    pub fn exponent(&self) -> i8 {
        if self.inverse { -1 } else { 1 }
    }

    pub fn inverted(&self) -> Self {
        Letter { index: self.index, inverse: !self.inverse }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "s{}^-1", self.index)
        } else {
            write!(f, "s{}", self.index)
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BraidWord {
    letters: Vec<Letter>,
}

impl BraidWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        BraidWord { letters }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a word from the letters in the order they are applied.
    pub fn from_applied(applied: &[Letter]) -> Self {
        BraidWord { letters: applied.iter().rev().copied().collect() }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Letters in the order they act: rightmost first.
    pub fn applied(&self) -> impl Iterator<Item = &Letter> {
        self.letters.iter().rev()
    }

    pub fn inverse(&self) -> Self {
        BraidWord { letters: self.letters.iter().rev().map(Letter::inverted).collect() }
    }

    /// The product `self · other`, where `other` acts first.
    pub fn then_after(&self, other: &BraidWord) -> Self {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        BraidWord { letters }
    }

    pub fn max_index(&self) -> usize {
        self.letters.iter().map(|l| l.index).max().unwrap_or(0)
    }

    /// Checks every generator is available with `n` strands.
    pub fn check_strands(&self, n: usize) -> Result<()> {
        match self.letters.iter().find(|l| l.index + 1 > n) {
            Some(l) => Err(Error::IndexOutOfRange { index: l.index, len: n.saturating_sub(1) }),
            None => Ok(()),
        }
    }
}

impl FromStr for BraidWord {
    type Err = Error;

    /// Parses whitespace separated letters such as `s1 s2^-1 s1`.
    fn from_str(s: &str) -> Result<Self> {
        let mut letters = Vec::new();
        let mut offset = 0;
        for token in s.split_whitespace() {
            let position = s[offset..].find(token).map_or(offset, |p| p + offset);
            offset = position + token.len();
            let bad = |message: &str| Error::Syntax { position, message: message.to_string() };
            let body = token
                .strip_prefix('s')
                .or_else(|| token.strip_prefix('σ'))
                .ok_or_else(|| bad("expected a letter of the form s<k>"))?;
            let (index, exponent) = match body.split_once('^') {
                Some((i, e)) => (i, e.trim_start_matches('+').parse::<i8>().map_err(|_| bad("bad exponent"))?),
                None => (body, 1),
            };
            let index: usize = index.parse().map_err(|_| bad("bad generator index"))?;
            letters.push(Letter::new(index, exponent).map_err(|e| bad(&e.to_string()))?);
        }
        Ok(BraidWord { letters })
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

fn check_generator(n: usize, i: usize) -> Result<usize> {
    if i == 0 || i >= n {
        return Err(Error::IndexOutOfRange { index: i, len: n.saturating_sub(1) });
    }
    Ok(i - 1)
}

/// Applies σ_i^exponent (i 1-based) to an arrangement matrix.
pub fn act_sigma(b: &ArrangementMatrix, i: usize, exponent: i8) -> Result<ArrangementMatrix> {
    let letter = Letter::new(i, exponent)?;
    let i = check_generator(b.n(), i)?;
    Ok(apply_letter(b, i, letter.inverse))
}

fn apply_letter(b: &ArrangementMatrix, i: usize, inverse: bool) -> ArrangementMatrix {
    let n = b.n();
    let a = b.get(i, i + 1);
    let mut out = b.clone();
    for j in 0..n {
        if j == i || j == i + 1 {
            continue;
        }
        let (row_i, row_next) = if inverse {
            (b.get(i + 1, j).clone(), b.get(i, j) - &(a * b.get(i + 1, j)))
        } else {
            (b.get(i + 1, j) - &(a * b.get(i, j)), b.get(i, j).clone())
        };
        out.set_sym(i, j, row_i);
        out.set_sym(i + 1, j, row_next);
    }
    out.set_sym(i, i + 1, -a);
    out
}

/// Applies a word, rightmost letter first.
pub fn act_word(b: &ArrangementMatrix, word: &BraidWord) -> Result<ArrangementMatrix> {
    word.check_strands(b.n())?;
    let mut cur = b.clone();
    for l in word.applied() {
        cur = apply_letter(&cur, l.index - 1, l.inverse);
    }
    Ok(cur)
}

/// The matrix K with σ_i(B) = K B K: identity outside the block [[−a, 1], [1, 0]] at (i, i+1).
pub fn k_matrix(b: &ArrangementMatrix, i: usize) -> Result<Matrix> {
    let i0 = check_generator(b.n(), i)?;
    Ok(block_matrix(b.n(), i0, [-b.get(i0, i0 + 1), ExactNumber::one(), ExactNumber::one(), ExactNumber::zero()]))
}

fn block_matrix(n: usize, i: usize, block: [ExactNumber; 4]) -> Matrix {
    let mut k = Matrix::identity(n);
    let [p, q, r, s] = block;
    k.set(i, i, p);
    k.set(i, i + 1, q);
    k.set(i + 1, i, r);
    k.set(i + 1, i + 1, s);
    k
}

/// Elements a tuple can be made of: composition and inversion.
pub trait GroupElement: Clone {
    /// The product `self · other`.
    fn compose(&self, other: &Self) -> Self;
    fn inverse(&self) -> Self;
}

impl GroupElement for Permutation {
    fn compose(&self, other: &Self) -> Self {
        Permutation::compose(self, other)
    }

    fn inverse(&self) -> Self {
        Permutation::inverse(self)
    }
}

impl GroupElement for Matrix {
    fn compose(&self, other: &Self) -> Self {
        self * other
    }

    /// Panics on singular input; tuple entries are reflections.
    fn inverse(&self) -> Self {
        Matrix::inverse(self).expect("group element must be invertible")
    }
}

/// σ_i sends (…, g_i, g_{i+1}, …) to (…, g_i g_{i+1} g_i⁻¹, g_i, …).
pub fn hurwitz<G: GroupElement>(tuple: &[G], i: usize, exponent: i8) -> Result<Vec<G>> {
    let letter = Letter::new(i, exponent)?;
    let i = check_generator(tuple.len(), i)?;
    let mut out = tuple.to_vec();
    hurwitz_in_place(&mut out, i, letter.inverse);
    Ok(out)
}

pub(crate) fn hurwitz_in_place<G: GroupElement>(t: &mut [G], i: usize, inverse: bool) {
    let (g, h) = (&t[i], &t[i + 1]);
    let (x, y) = if inverse {
        (h.clone(), h.inverse().compose(g).compose(h))
    } else {
        (g.compose(h).compose(&g.inverse()), g.clone())
    };
    t[i] = x;
    t[i + 1] = y;
}

pub fn hurwitz_word<G: GroupElement>(tuple: &[G], word: &BraidWord) -> Result<Vec<G>> {
    word.check_strands(tuple.len())?;
    let mut out = tuple.to_vec();
    for l in word.applied() {
        hurwitz_in_place(&mut out, l.index - 1, l.inverse);
    }
    Ok(out)
}

fn is_upper_unitriangular(s: &Matrix) -> bool {
    (0..s.rows()).all(|i| {
        s.get(i, i).is_one() && (0..i).all(|j| s.get(i, j).is_zero())
    })
}

/// Action on an upper unitriangular Stokes matrix S by S ↦ K S Kᵀ.
pub fn stokes_act(s: &Matrix, i: usize, exponent: i8) -> Result<Matrix> {
    let letter = Letter::new(i, exponent)?;
    if !s.is_square() || !is_upper_unitriangular(s) {
        return Err(Error::Precondition("Stokes matrix must be upper unitriangular".into()));
    }
    let i0 = check_generator(s.rows(), i)?;
    let a = s.get(i0, i0 + 1).clone();
    let (one, zero) = (ExactNumber::one(), ExactNumber::zero());
    let k = if letter.inverse {
        block_matrix(s.rows(), i0, [zero, one.clone(), one, -&a])
    } else {
        block_matrix(s.rows(), i0, [-&a, one.clone(), one, zero])
    };
    let out = &(&k * s) * &k.transpose();
    debug_assert!(is_upper_unitriangular(&out));
    Ok(out)
}

/// Symmetrization S + Sᵀ, which carries the Stokes action to the matrix action.
pub fn stokes_to_arrangement(s: &Matrix) -> Result<ArrangementMatrix> {
    ArrangementMatrix::from_matrix(&(s + &s.transpose()))
}

/// Tracks a physical arrangement and the letters applied to reach it.
struct Mover<'a> {
    adjacent: &'a [Vec<bool>],
    order: Vec<usize>,
    applied: Vec<Letter>,
}

impl Mover<'_> {
    fn position(&self, v: usize) -> usize {
        self.order.iter().position(|&x| x == v).expect("vertex present")
    }

    /// σ_{n−1}⋯σ_1 with σ_1 applied first: rotates the order one step left.
    fn rotate(&mut self) {
        let n = self.order.len();
        for i in 1..n {
            self.applied.push(Letter { index: i, inverse: false });
        }
        self.order.rotate_left(1);
    }

    /// Swaps x with its circular successor y; the two must commute.
    fn physical_swap(&mut self, x: usize, y: usize) {
        debug_assert!(!self.adjacent[x][y]);
        let n = self.order.len();
        let mut p = self.position(x);
        if p == n - 1 {
            self.rotate();
            p = n - 2;
        }
        debug_assert_eq!(self.order[p + 1], y);
        self.applied.push(Letter { index: p + 1, inverse: false });
        self.order.swap(p, p + 1);
    }

    /// Swaps x and y, consecutive in the circular order restricted to `levels[level]`.
    ///
    /// `removed[level]` is the leaf that was dropped to go from level−1 to level,
    /// with `parent[level]` its only neighbour at level−1.
    fn swap(&mut self, level: usize, x: usize, y: usize, removed: &[usize], parent: &[usize]) {
        if level == 0 {
            return self.physical_swap(x, y);
        }
        let leaf = removed[level];
        if self.circular_between(x, y, leaf, level - 1, removed) {
            if parent[level] == y {
                self.swap(level - 1, x, leaf, removed, parent);
            } else {
                self.swap(level - 1, leaf, y, removed, parent);
            }
        }
        self.swap(level - 1, x, y, removed, parent);
    }

    /// Whether `z` sits between x and y when only vertices alive at `level` are kept.
    fn circular_between(&self, x: usize, y: usize, z: usize, level: usize, removed: &[usize]) -> bool {
        let alive = |v: usize| !removed[1..=level].contains(&v);
        let n = self.order.len();
        let mut p = (self.position(x) + 1) % n;
        loop {
            let v = self.order[p];
            if v == y {
                return false;
            }
            if v == z {
                return true;
            }
            debug_assert!(!alive(v) || v == z);
            p = (p + 1) % n;
        }
    }

    /// The circular sequence of vertices alive at `level`, starting after `v`.
    fn alive_after(&self, v: usize, level: usize, removed: &[usize]) -> Vec<usize> {
        let n = self.order.len();
        let start = self.position(v);
        (1..n)
            .map(|k| self.order[(start + k) % n])
            .filter(|u| !removed[1..=level].contains(u))
            .collect()
    }
}

/// A braid word taking a tree arrangement to the reindexed arrangement
/// `b.permuted(target)`, up to sign: position p of the result holds vertex `target[p]`.
///
/// Built from commuting swaps σ_i and the rotation σ_{n−1}⋯σ_1.
pub fn reorder_tree(b: &ArrangementMatrix, target: &[usize]) -> Result<BraidWord> {
    let n = b.n();
    if target.len() != n || Permutation::from_images(target.iter().map(|&x| x as u32).collect()).is_err() {
        return Err(Error::Invalid("target must be a permutation of the vertices".into()));
    }
    if !b.is_tree() {
        return Err(Error::NotATree);
    }
    let adjacent: Vec<Vec<bool>> =
        (0..n).map(|i| (0..n).map(|j| i != j && !b.get(i, j).is_zero()).collect()).collect();

    // Peel leaves: removed[k] is dropped at step k, attached to parent[k]; index 0 unused.
    let mut removed = vec![usize::MAX];
    let mut parent = vec![usize::MAX];
    let mut alive = vec![true; n];
    for _ in 0..n.saturating_sub(2) {
        let (leaf, par) = (0..n)
            .filter(|&v| alive[v])
            .find_map(|v| {
                let nb: Vec<usize> = (0..n).filter(|&u| alive[u] && adjacent[v][u]).collect();
                (nb.len() == 1).then(|| (v, nb[0]))
            })
            .expect("a tree with at least two vertices has a leaf");
        alive[leaf] = false;
        removed.push(leaf);
        parent.push(par);
    }

    let mut mover = Mover { adjacent: &adjacent, order: (0..n).collect(), applied: Vec::new() };
    let target_pos: Vec<usize> = {
        let mut p = vec![0; n];
        for (k, &v) in target.iter().enumerate() {
            p[v] = k;
        }
        p
    };

    // Reinsert leaves from the innermost level outwards; at level k−1 the
    // vertices alive at level k already appear in target circular order.
    for k in (1..removed.len()).rev() {
        let level = k - 1;
        let leaf = removed[k];
        // Target neighbours of the leaf among the vertices alive at `level`.
        let alive_target: Vec<usize> =
            target.iter().copied().filter(|v| !removed[1..=level].contains(v)).collect();
        let t = alive_target.iter().position(|&v| v == leaf).unwrap();
        let m = alive_target.len();
        let pred = alive_target[(t + m - 1) % m];
        let ring = mover.alive_after(leaf, level, &removed);
        let ahead = ring.iter().position(|&v| v == pred).unwrap();
        let forward_ok = !ring[..=ahead].contains(&parent[k]);
        if forward_ok {
            for _ in 0..=ahead {
                let next = mover.alive_after(leaf, level, &removed)[0];
                mover.swap(level, leaf, next, &removed, &parent);
            }
        } else {
            for _ in 0..ring.len() - 1 - ahead {
                let prev = *mover.alive_after(leaf, level, &removed).last().unwrap();
                mover.swap(level, prev, leaf, &removed, &parent);
            }
        }
    }

    if n > 1 {
        while target_pos[mover.order[0]] != 0 {
            mover.rotate();
        }
    }
    debug_assert_eq!(mover.order, target);
    let word = BraidWord::from_applied(&mover.applied);
    let reached = act_word(b, &word)?;
    if !reached.is_sign_equivalent(&b.permuted(target)) {
        return Err(Error::Invalid("reordering did not reach the target arrangement".into()));
    }
    Ok(word)
}

/// Ascent and descent counts (q<, q>) of a closed walk in the arrangement graph,
/// comparing consecutive vertex positions cyclically.
pub fn cycle_invariants(b: &ArrangementMatrix, cycle: &[usize]) -> Result<(usize, usize)> {
    let n = b.n();
    if cycle.len() < 3 {
        return Err(Error::Precondition("a cycle needs at least three vertices".into()));
    }
    if let Some(&v) = cycle.iter().find(|&&v| v >= n) {
        return Err(Error::IndexOutOfRange { index: v, len: n });
    }
    let (mut ascents, mut descents) = (0, 0);
    for k in 0..cycle.len() {
        let (u, v) = (cycle[k], cycle[(k + 1) % cycle.len()]);
        if u == v || b.get(u, v).is_zero() {
            return Err(Error::Precondition(format!("no edge between vertices {} and {}", u + 1, v + 1)));
        }
        if u < v {
            ascents += 1;
        } else {
            descents += 1;
        }
    }
    Ok((ascents, descents))
}

/// Invariants of a cycle glued from two cycles sharing `shared` edges.
pub fn combine_cycle_invariants(first: (usize, usize), second: (usize, usize), shared: usize) -> Result<(usize, usize)> {
    let asc = (first.0 + second.0).checked_sub(shared);
    let desc = (first.1 + second.1).checked_sub(shared);
    match (asc, desc) {
        (Some(a), Some(d)) => Ok((a, d)),
        _ => Err(Error::Precondition("shared edge count exceeds the combined counts".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a3_path() -> ArrangementMatrix {
        ArrangementMatrix::from_ints(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]).unwrap()
    }

    #[test]
    fn parse_and_display() {
        let w: BraidWord = "s1 s2^-1  s1".parse().unwrap();
        assert_eq!(w.to_string(), "s1 s2^-1 s1");
        assert_eq!(w.inverse().to_string(), "s1^-1 s2 s1^-1");
        assert!("t1".parse::<BraidWord>().is_err());
        assert!("s0".parse::<BraidWord>().is_err());
        assert!("".parse::<BraidWord>().unwrap().is_empty());
    }

    #[test]
    fn sigma_and_inverse_cancel() {
        let b = a3_path();
        for i in 1..3 {
            let up = act_sigma(&b, i, 1).unwrap();
            assert_eq!(act_sigma(&up, i, -1).unwrap(), b);
        }
        assert!(act_sigma(&b, 3, 1).is_err());
    }

    #[test]
    fn k_matrix_conjugation() {
        let b = a3_path();
        let k = k_matrix(&b, 1).unwrap();
        let via_k = &(&k * &b.to_matrix()) * &k;
        assert_eq!(via_k, act_sigma(&b, 1, 1).unwrap().to_matrix());
    }

    #[test]
    fn transpositions_follow_hurwitz() {
        let t = vec![Permutation::transposition(3, 0, 1), Permutation::transposition(3, 1, 2)];
        let out = hurwitz(&t, 1, 1).unwrap();
        assert_eq!(out[0], Permutation::transposition(3, 0, 2));
        assert_eq!(out[1], Permutation::transposition(3, 0, 1));
        assert_eq!(hurwitz(&out, 1, -1).unwrap(), t);
    }

    #[test]
    fn stokes_stays_triangular() {
        let s = Matrix::from_ints(&[&[1, 3, -1], &[0, 1, 2], &[0, 0, 1]]);
        for i in 1..3 {
            for e in [1, -1] {
                let out = stokes_act(&s, i, e).unwrap();
                assert!(is_upper_unitriangular(&out));
                assert_eq!(stokes_act(&out, i, -e).unwrap(), s);
                let sym = stokes_to_arrangement(&s).unwrap();
                let via_matrix = act_sigma(&sym, i, e).unwrap();
                assert!(stokes_to_arrangement(&out).unwrap().is_sign_equivalent(&via_matrix));
            }
        }
    }

    #[test]
    fn reorder_path_and_star() {
        let b = a3_path();
        for target in [[2, 1, 0], [1, 0, 2], [0, 2, 1]] {
            reorder_tree(&b, &target).unwrap();
        }
        let star = ArrangementMatrix::from_ints(&[
            &[2, -1, -1, -1],
            &[-1, 2, 0, 0],
            &[-1, 0, 2, 0],
            &[-1, 0, 0, 2],
        ])
        .unwrap();
        reorder_tree(&star, &[3, 1, 0, 2]).unwrap();
        let cycle = ArrangementMatrix::from_ints(&[&[2, -1, -1], &[-1, 2, -1], &[-1, -1, 2]]).unwrap();
        assert!(matches!(reorder_tree(&cycle, &[0, 1, 2]), Err(Error::NotATree)));
    }

    #[test]
    fn four_cycle_invariants() {
        let b = ArrangementMatrix::from_ints(&[
            &[2, -1, 0, -1],
            &[-1, 2, -1, 0],
            &[0, -1, 2, -1],
            &[-1, 0, -1, 2],
        ])
        .unwrap();
        assert_eq!(cycle_invariants(&b, &[0, 1, 2, 3]).unwrap(), (3, 1));
        assert!(cycle_invariants(&b, &[0, 2, 1, 3]).is_err());
        assert_eq!(combine_cycle_invariants((3, 1), (2, 2), 1).unwrap(), (4, 2));
        assert!(combine_cycle_invariants((1, 0), (0, 0), 1).is_err());
    }
}
