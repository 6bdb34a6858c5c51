//! Permutations of {0, …, n−1} stored by images.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            let x = x as usize;
            if x >= images.len() || seen[x] {
                return Err(Error::Invalid("images do not form a bijection".into()));
            }
            seen[x] = true;
        }
        Ok(Permutation(images))
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut v: Vec<u32> = (0..n as u32).collect();
        v.swap(a, b);
        Permutation(v)
    }

    /// All n! permutations in lexicographic order of image lists.
    pub fn all(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut cur: Vec<u32> = (0..n as u32).collect();
        loop {
            out.push(Permutation(cur.clone()));
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
                return out;
            };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    /// self ∘ other: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Permutation(other.0.iter().map(|&x| self.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut v = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            v[x as usize] = i as u32;
        }
        Permutation(v)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// Cycles of length ≥ 2, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for s in 0..self.0.len() {
            if seen[s] {
                continue;
            }
            let mut c = vec![s];
            seen[s] = true;
            let mut x = self.apply(s);
            while x != s {
                seen[x] = true;
                c.push(x);
                x = self.apply(x);
            }
            if c.len() > 1 {
                out.push(c);
            }
        }
        out
    }

    /// Sorted lengths of all cycles, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let moved: usize = self.cycles().iter().map(|c| c.len()).sum();
        let mut t: Vec<usize> = self.cycles().iter().map(|c| c.len()).collect();
        t.extend(std::iter::repeat_n(1, self.0.len() - moved));
        t.sort_unstable();
        t
    }

    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| crate::arith::lcm(acc, c.len() as u64))
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation on 1-based points; "()" for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_and_cycles() {
        let a = Permutation::transposition(3, 0, 1);
        let b = Permutation::transposition(3, 1, 2);
        let ab = a.compose(&b);
        assert_eq!(ab.cycle_type(), vec![3]);
        assert_eq!(ab.order(), 3);
        assert!(ab.compose(&ab.inverse()).is_identity());
        assert_eq!(a.to_string(), "(1 2)");
        assert!(Permutation::from_images(vec![0, 0]).is_err());
    }
}
