//! Quasicoxeter elements from arrangement matrices, characteristic polynomials
//! and their cyclotomic fingerprints.

use serde_json::{json, Value};

use crate::arith::{euler_phi, gcd};
use crate::arrangement::ArrangementMatrix;
use crate::braid_action::GroupElement;
use crate::error::{Error, Result};
use crate::exact_number::ExactNumber;
use crate::matrix::Matrix;
use crate::poly::Poly;

/// U is the strictly upper part of B, V = B − U.
pub fn split_uv(b: &ArrangementMatrix) -> (Matrix, Matrix) {
    let n = b.n();
    let u = Matrix::from_fn(n, n, |i, j| if i < j { b.get(i, j).clone() } else { ExactNumber::zero() });
    let v = Matrix::from_fn(n, n, |i, j| if i >= j { b.get(i, j).clone() } else { ExactNumber::zero() });
    (u, v)
}

/// M = (I + U)⁻¹(I − V), the matrix of r_1⋯r_n in the basis {v_j} when B is invertible.
pub fn cox_matrix(b: &ArrangementMatrix) -> Matrix {
    let n = b.n();
    let rhs = Matrix::from_fn(n, n, |i, j| {
        let id = if i == j { ExactNumber::one() } else { ExactNumber::zero() };
        if i >= j { &id - b.get(i, j) } else { id }
    });
    let mut x = rhs.clone();
    // Back substitution through the unipotent factor I + U.
    for i in (0..n).rev() {
        for c in 0..n {
            let mut acc = rhs.get(i, c).clone();
            for j in i + 1..n {
                let u = b.get(i, j);
                if !u.is_zero() && !x.get(j, c).is_zero() {
                    acc -= &(u * x.get(j, c));
                }
            }
            x.set(i, c, acc);
        }
    }
    x
}

/// Integer version of [`cox_matrix`] for integer arrangement matrices (row-major).
pub fn cox_matrix_int(n: usize, b: &[i64]) -> Vec<i64> {
    let mut x = vec![0i64; n * n];
    for i in (0..n).rev() {
        for c in 0..n {
            let mut acc = if i == c { 1 } else { 0 };
            if i >= c {
                acc -= b[i * n + c];
            }
            for j in i + 1..n {
                acc -= b[i * n + j] * x[j * n + c];
            }
            x[i * n + c] = acc;
        }
    }
    x
}

/// det(xI − M) of an integer matrix by Faddeev–LeVerrier; coefficients lowest degree first.
pub fn charpoly_int(n: usize, m: &[i64]) -> Vec<i128> {
    let a: Vec<i128> = m.iter().map(|&x| x as i128).collect();
    let mut coeffs = vec![0i128; n + 1];
    coeffs[n] = 1;
    let mut mk = vec![0i128; n * n];
    for k in 1..=n {
        // M_k = A·M_{k−1} + c_{n−k+1} I
        let mut next = vec![0i128; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut s = 0i128;
                for l in 0..n {
                    s += a[i * n + l] * mk[l * n + j];
                }
                next[i * n + j] = s;
            }
            next[i * n + i] += coeffs[n - k + 1];
        }
        mk = next;
        let mut trace = 0i128;
        for i in 0..n {
            for l in 0..n {
                trace += a[i * n + l] * mk[l * n + i];
            }
        }
        coeffs[n - k] = -trace / k as i128;
    }
    coeffs
}

/// det(xI − M) by reduction to upper Hessenberg form.
pub fn charpoly(m: &Matrix) -> Result<Poly> {
    if !m.is_square() {
        return Err(Error::Dimension("characteristic polynomial of a non-square matrix".into()));
    }
    let n = m.rows();
    let mut h = m.to_rows();
    for k in 0..n.saturating_sub(2) {
        let Some(p) = (k + 1..n).find(|&i| !h[i][k].is_zero()) else {
            continue;
        };
        if p != k + 1 {
            h.swap(p, k + 1);
            for row in h.iter_mut() {
                row.swap(p, k + 1);
            }
        }
        let pivot_inv = h[k + 1][k].inv()?;
        for i in k + 2..n {
            if h[i][k].is_zero() {
                continue;
            }
            let f = &h[i][k] * &pivot_inv;
            // Row i −= f·row k+1, then column k+1 += f·column i.
            for j in 0..n {
                if !h[k + 1][j].is_zero() {
                    let t = &f * &h[k + 1][j];
                    h[i][j] -= &t;
                }
            }
            for row in h.iter_mut() {
                if !row[i].is_zero() {
                    let t = &f * &row[i];
                    row[k + 1] += &t;
                }
            }
        }
    }
    // p_k = (x − h_kk) p_{k−1} − Σ_{i<k} h_ik (h_{i+1,i}⋯h_{k,k−1}) p_{i−1}
    let mut polys: Vec<Poly> = vec![Poly::one()];
    for k in 0..n {
        let mut p = &Poly::linear_root(&h[k][k]) * &polys[k];
        let mut sub = ExactNumber::one();
        for i in (0..k).rev() {
            sub = &sub * &h[i + 1][i];
            if sub.is_zero() {
                break;
            }
            let c = &sub * &h[i][k];
            if !c.is_zero() {
                p = &p - &(&Poly::constant(c) * &polys[i]);
            }
        }
        polys.push(p);
    }
    Ok(polys.pop().expect("at least the constant polynomial"))
}

/// Smallest N ≤ cap with M^N = I.
pub fn element_order(m: &Matrix, cap: u64) -> Option<u64> {
    if !m.is_square() {
        return None;
    }
    let mut acc = m.clone();
    for k in 1..=cap {
        if acc.is_identity() {
            return Some(k);
        }
        acc = &acc * m;
    }
    None
}

/// Order of an element of any group representation, by powering.
pub fn group_element_order<G: GroupElement + PartialEq>(g: &G, identity: &G, cap: u64) -> Option<u64> {
    let mut acc = g.clone();
    for k in 1..=cap {
        if &acc == identity {
            return Some(k);
        }
        acc = acc.compose(g);
    }
    None
}

/// The ordered product g_1 g_2 ⋯ g_n.
pub fn quasicox_of_tuple<G: GroupElement>(tuple: &[G]) -> Option<G> {
    let (first, rest) = tuple.split_first()?;
    Some(rest.iter().fold(first.clone(), |acc, g| acc.compose(g)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPolyFingerprint {
    /// (d, multiplicity), d ascending.
    pub cyclotomic: Vec<(u64, u32)>,
    /// (p, q) for x² − 2cos(πp/q)x + 1, p/q ascending.
    pub quadratic: Vec<(i64, u64)>,
    pub residual: Option<Poly>,
}

impl CharPolyFingerprint {
    /// Multiplies the listed factors back together.
    pub fn product(&self) -> Poly {
        let mut acc = Poly::one();
        for &(d, mult) in &self.cyclotomic {
            acc = &acc * &Poly::cyclotomic(d).pow(mult);
        }
        for &(p, q) in &self.quadratic {
            acc = &acc * &Poly::cos_quadratic(p, q);
        }
        if let Some(r) = &self.residual {
            acc = &acc * r;
        }
        acc
    }

    /// lcm of the root orders, when every factor has roots of unity as roots.
    pub fn implied_order(&self) -> Option<u64> {
        if self.residual.is_some() {
            return None;
        }
        let mut acc = 1u64;
        for &(d, _) in &self.cyclotomic {
            acc = crate::arith::lcm(acc, d);
        }
        for &(p, q) in &self.quadratic {
            // Roots e^{±iπp/q} have order 2q / gcd(p, 2q).
            let two_q = 2 * q;
            acc = crate::arith::lcm(acc, two_q / gcd(p.unsigned_abs(), two_q));
        }
        Some(acc)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "cyclotomic": self.cyclotomic.iter().map(|&(d, m)| json!([d, m])).collect::<Vec<_>>(),
            "quadratic": self.quadratic.iter().map(|&(p, q)| json!([p, q])).collect::<Vec<_>>(),
            "residual": self.residual.as_ref().map(|r| json!(r.coeff_strings())),
        })
    }

    /// Compact text such as `Φ2Φ6^3` or `[1/15][11/15]`.
    pub fn label(&self) -> String {
        let mut s = String::new();
        for &(d, m) in &self.cyclotomic {
            s.push_str(&format!("Φ{d}"));
            if m > 1 {
                s.push_str(&format!("^{m}"));
            }
        }
        for &(p, q) in &self.quadratic {
            s.push_str(&format!("[{p}/{q}]"));
        }
        if let Some(r) = &self.residual {
            s.push_str(&format!("{{{r}}}"));
        }
        s
    }
}

/// Search limits for [`cyclo_fingerprint_with`].
#[derive(Clone, Copy, Debug)]
pub struct FingerprintBounds {
    pub max_cyclotomic_index: u64,
    pub max_quadratic_denominator: u64,
}

impl Default for FingerprintBounds {
    fn default() -> Self {
        FingerprintBounds { max_cyclotomic_index: 1000, max_quadratic_denominator: 120 }
    }
}

pub fn cyclo_fingerprint(p: &Poly) -> Result<CharPolyFingerprint> {
    cyclo_fingerprint_with(p, FingerprintBounds::default())
}

fn near_root(p: &Poly, angle: f64) -> bool {
    let (re, im) = p.eval_complex(angle.cos(), angle.sin());
    let scale: f64 = p.coeffs().iter().map(|c| c.to_complex().0.abs() + c.to_complex().1.abs()).sum();
    (re * re + im * im).sqrt() <= 1e-6 * scale.max(1.0)
}

/// Divides out cyclotomic factors in ascending order, then quadratics x² − 2cos(πp/q)x + 1.
/// A complex-embedding evaluation filters candidates before each exact division.
pub fn cyclo_fingerprint_with(p: &Poly, bounds: FingerprintBounds) -> Result<CharPolyFingerprint> {
    if !p.is_monic() {
        return Err(Error::Precondition("fingerprint requires a monic polynomial".into()));
    }
    let mut rest = p.clone();
    let mut cyclotomic = Vec::new();
    let deg = |r: &Poly| r.degree().unwrap_or(0) as u64;
    for d in 1..=bounds.max_cyclotomic_index {
        if euler_phi(d) > deg(&rest) {
            continue;
        }
        let angle = 2.0 * std::f64::consts::PI / d as f64;
        let mut mult = 0;
        while deg(&rest) > 0 && near_root(&rest, angle) {
            match rest.div_exact(&Poly::cyclotomic(d)) {
                Some(q) => {
                    rest = q;
                    mult += 1;
                }
                None => break,
            }
        }
        if mult > 0 {
            cyclotomic.push((d, mult));
        }
    }
    let mut quadratic = Vec::new();
    for q in 2..=bounds.max_quadratic_denominator {
        for p_num in 1..q as i64 {
            if deg(&rest) < 2 || gcd(p_num as u64, q) != 1 {
                continue;
            }
            let angle = std::f64::consts::PI * p_num as f64 / q as f64;
            while deg(&rest) >= 2 && near_root(&rest, angle) {
                match rest.div_exact(&Poly::cos_quadratic(p_num, q)) {
                    Some(r) => {
                        rest = r;
                        quadratic.push((p_num, q));
                    }
                    None => break,
                }
            }
        }
    }
    quadratic.sort_by(|a, b| (a.0 as i128 * b.1 as i128).cmp(&(b.0 as i128 * a.1 as i128)));
    let residual = if rest.degree() == Some(0) { None } else { Some(rest) };
    Ok(CharPolyFingerprint { cyclotomic, quadratic, residual })
}

/// Fingerprint of the characteristic polynomial of the quasicoxeter matrix of B.
pub fn cox_fingerprint(b: &ArrangementMatrix) -> Result<CharPolyFingerprint> {
    if let Some(ints) = integer_entries(b) {
        let n = b.n();
        let cp = charpoly_int(n, &cox_matrix_int(n, &ints));
        if cp.iter().all(|&c| i64::try_from(c).is_ok()) {
            return cyclo_fingerprint(&Poly::from_ints(&cp.iter().map(|&c| c as i64).collect::<Vec<_>>()));
        }
    }
    cyclo_fingerprint(&charpoly(&cox_matrix(b))?)
}

pub(crate) fn integer_entries(b: &ArrangementMatrix) -> Option<Vec<i64>> {
    b.entries().iter().map(|e| e.to_integer()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::cofactor_det;

    fn gamma0_a(n: usize) -> ArrangementMatrix {
        ArrangementMatrix::from_upper(n, |_, _| ExactNumber::one())
    }

    fn cofactor_charpoly_at(m: &Matrix, x: i64) -> ExactNumber {
        let n = m.rows();
        let shifted = Matrix::from_fn(n, n, |i, j| {
            let d = if i == j { ExactNumber::from_int(x) } else { ExactNumber::zero() };
            &d - m.get(i, j)
        });
        cofactor_det(&shifted)
    }

    #[test]
    fn split_and_cox_small() {
        let b = gamma0_a(2);
        let (u, v) = split_uv(&b);
        assert_eq!(u, Matrix::from_ints(&[&[0, 1], &[0, 0]]));
        assert_eq!(v, Matrix::from_ints(&[&[2, 0], &[1, 2]]));
        let m = cox_matrix(&b);
        assert_eq!(m, Matrix::from_ints(&[&[0, 1], &[-1, -1]]));
        assert_eq!(charpoly(&m).unwrap(), Poly::from_ints(&[1, 1, 1]));
        assert_eq!(element_order(&m, 10), Some(3));
        let single = ArrangementMatrix::from_ints(&[&[2]]).unwrap();
        assert_eq!(cox_matrix(&single), Matrix::from_ints(&[&[-1]]));
    }

    #[test]
    fn charpoly_matches_cofactor_oracle() {
        let m = Matrix::from_ints(&[&[0, 2, -1, 3], &[1, 0, 0, 2], &[0, 0, 4, -1], &[5, 1, 0, 1]]);
        let p = charpoly(&m).unwrap();
        for x in -3..4 {
            assert_eq!(p.eval(&ExactNumber::from_int(x)), cofactor_charpoly_at(&m, x));
        }
        assert_eq!(charpoly(&Matrix::identity(3)).unwrap(), Poly::from_ints(&[-1, 3, -3, 1]));
    }

    #[test]
    fn integer_path_agrees() {
        for n in 1..=8 {
            let b = gamma0_a(n);
            let ints = integer_entries(&b).unwrap();
            let mi = cox_matrix_int(n, &ints);
            let me = cox_matrix(&b);
            assert!(mi.iter().zip(me.data()).all(|(a, e)| e.to_integer() == Some(*a)));
            let cp = charpoly_int(n, &mi);
            let exact = charpoly(&me).unwrap();
            assert!(cp.iter().enumerate().all(|(k, &c)| exact.coeff(k).to_integer() == Some(c as i64)));
            // Γ0(A_n) gives x^n + … + 1.
            assert!(cp.iter().all(|&c| c == 1));
        }
    }

    #[test]
    fn fingerprints() {
        let f = cyclo_fingerprint(&Poly::from_ints(&[1, 1, 1])).unwrap();
        assert_eq!(f.cyclotomic, vec![(3, 1)]);
        assert_eq!(f.to_json().to_string(), r#"{"cyclotomic":[[3,1]],"quadratic":[],"residual":null}"#);
        let phi9 = Poly::cyclotomic(9);
        assert_eq!(cyclo_fingerprint(&phi9).unwrap().cyclotomic, vec![(9, 1)]);
        let h4 = &Poly::cos_quadratic(11, 15) * &Poly::cos_quadratic(1, 15);
        let f = cyclo_fingerprint(&h4).unwrap();
        assert_eq!(f.quadratic, vec![(1, 15), (11, 15)]);
        assert_eq!(f.product(), h4);
        assert_eq!(f.implied_order(), Some(30));
        let odd = Poly::from_ints(&[1, -3, 1]);
        let f = cyclo_fingerprint(&odd).unwrap();
        assert_eq!(f.residual, Some(odd));
        assert!(cyclo_fingerprint(&Poly::from_ints(&[1, 2])).is_err());
    }
}
