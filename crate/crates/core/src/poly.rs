//! Univariate polynomials with [`ExactNumber`] coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::exact_number::{cyclotomic_coeffs, ExactNumber};

/// Coefficients lowest degree first, without trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<ExactNumber>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<ExactNumber>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(ExactNumber::one())
    }

    pub fn constant(c: ExactNumber) -> Self {
        Self::new(vec![c])
    }

    /// x − c
    pub fn linear_root(c: &ExactNumber) -> Self {
        Self::new(vec![-c, ExactNumber::one()])
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| ExactNumber::from_int(x)).collect())
    }

    pub fn cyclotomic(d: u64) -> Self {
        Self::from_ints(&cyclotomic_coeffs(d))
    }

    /// x² − 2cos(πp/q)·x + 1
    pub fn cos_quadratic(p: i64, q: u64) -> Self {
        Self::new(vec![ExactNumber::one(), -ExactNumber::two_cos(p, q), ExactNumber::one()])
    }

    pub fn coeffs(&self) -> &[ExactNumber] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&ExactNumber> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn coeff(&self, k: usize) -> ExactNumber {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Quotient and remainder; the divisor must be non-zero.
    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = d.coeffs[dd].inv()?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut q = vec![ExactNumber::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = if lead_inv.is_one() { r[k + dd].clone() } else { &r[k + dd] * &lead_inv };
            if !c.is_zero() {
                for (j, dj) in d.coeffs.iter().enumerate() {
                    if !dj.is_zero() {
                        let t = &c * dj;
                        r[k + j] -= &t;
                    }
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((Poly::new(q), Poly::new(r)))
    }

    /// Exact quotient when `d` divides `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.divrem(d).ok()?;
        r.is_zero().then_some(q)
    }

    pub fn eval(&self, x: &ExactNumber) -> ExactNumber {
        let mut acc = ExactNumber::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Horner evaluation of the complex embedding at (re, im).
    pub fn eval_complex(&self, re: f64, im: f64) -> (f64, f64) {
        let mut a = (0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            let (cr, ci) = c.to_complex();
            a = (a.0 * re - a.1 * im + cr, a.0 * im + a.1 * re + ci);
        }
        a
    }

    /// Coefficients rendered in the expression grammar.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![ExactNumber::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += &(a * b);
                }
            }
        }
        Poly::new(v)
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (neg, body) = match c.to_rational() {
                Some(r) => (r < num_traits::Zero::zero(), {
                    let a = num_traits::Signed::abs(&r);
                    if num_traits::One::is_one(&a) && k > 0 { String::new() } else { a.to_string() }
                }),
                None => (false, format!("({c})")),
            };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            f.write_str(&body)?;
            match k {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_products() {
        // x^6 − 1 = Φ1 Φ2 Φ3 Φ6
        let mut acc = Poly::one();
        for d in [1, 2, 3, 6] {
            acc = &acc * &Poly::cyclotomic(d);
        }
        assert_eq!(acc, Poly::from_ints(&[-1, 0, 0, 0, 0, 0, 1]));
        assert_eq!(acc.div_exact(&Poly::cyclotomic(3)).unwrap().degree(), Some(4));
        assert!(acc.div_exact(&Poly::cyclotomic(4)).is_none());
    }

    #[test]
    fn quadratic_pairs_multiply_to_cyclotomic() {
        // Φ10 over Q(√5) splits as (x² − 2cos(π/5)x + 1)(x² − 2cos(3π/5)x + 1)
        let prod = &Poly::cos_quadratic(1, 5) * &Poly::cos_quadratic(3, 5);
        assert_eq!(prod, Poly::cyclotomic(10));
        assert_eq!(Poly::from_ints(&[1, 1, 1]).to_string(), "x^2 + x + 1");
        assert_eq!(Poly::from_ints(&[-1, 0, 1]).to_string(), "x^2 - 1");
    }
}
