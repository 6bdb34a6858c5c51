//! Dense matrices over [`ExactNumber`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::exact_number::ExactNumber;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<ExactNumber>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<ExactNumber>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length must be rows*cols");
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![ExactNumber::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ExactNumber::one() } else { ExactNumber::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> ExactNumber) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<ExactNumber>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let v = rows
            .iter()
            .map(|row| row.iter().map(|&x| ExactNumber::from_int(x)).collect())
            .collect();
        Self::from_rows(v).expect("rectangular integer rows")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &ExactNumber {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ExactNumber) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[ExactNumber] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<ExactNumber> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn data(&self) -> &[ExactNumber] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<ExactNumber>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, c: &ExactNumber) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j { x.is_one() } else { x.is_zero() }
                })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul_vec(&self, v: &[ExactNumber]) -> Vec<ExactNumber> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = ExactNumber::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, e: u32) -> Self {
        assert!(self.is_square());
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> ExactNumber {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return ExactNumber::one();
        }
        let mut a = self.to_rows();
        let mut prev = ExactNumber::one();
        let mut negate = false;
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        negate = !negate;
                    }
                    None => return ExactNumber::zero(),
                }
            }
            let prev_inv = prev.inv().expect("Bareiss pivot is non-zero");
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = if prev.is_one() { t } else { &t * &prev_inv };
                }
                a[i][k] = ExactNumber::zero();
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        if negate {
            -d
        } else {
            d
        }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut a = self.to_rows();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            let inv = a[r][c].inv().expect("non-zero pivot");
            for x in a[r].iter_mut() {
                *x = &*x * &inv;
            }
            for i in 0..self.rows {
                if i != r && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    for j in 0..self.cols {
                        if !a[r][j].is_zero() {
                            let t = &f * &a[r][j];
                            a[i][j] -= &t;
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (Matrix::from_rows(a).unwrap_or_else(|_| Matrix::zeros(self.rows, self.cols)), pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                ExactNumber::one()
            } else {
                ExactNumber::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        Ok(Self::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
    }

    /// Basis of the right null space {x : A x = 0}.
    pub fn kernel(&self) -> Vec<Vec<ExactNumber>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![ExactNumber::zero(); self.cols];
                v[f] = ExactNumber::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r.get(row, f);
                }
                v
            })
            .collect()
    }

    /// Some solution of A x = b, if one exists.
    pub fn solve(&self, b: &[ExactNumber]) -> Option<Vec<ExactNumber>> {
        let aug = Self::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols { self.get(i, j).clone() } else { b[i].clone() }
        });
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![ExactNumber::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols).clone();
        }
        Some(x)
    }
}

impl Mul<&Matrix> for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * rhs.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        out
    }
}

impl Add<&Matrix> for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub<&Matrix> for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        f.write_str("]")
    }
}

/// Determinant by cofactor expansion along the first row. Exponential; test oracle only.
pub fn cofactor_det(m: &Matrix) -> ExactNumber {
    let n = m.rows();
    if n == 0 {
        return ExactNumber::one();
    }
    if n == 1 {
        return m.get(0, 0).clone();
    }
    let mut acc = ExactNumber::zero();
    for j in 0..n {
        let rows: Vec<usize> = (1..n).collect();
        let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
        let minor = cofactor_det(&m.submatrix(&rows, &cols));
        let t = m.get(0, j) * &minor;
        if j % 2 == 0 {
            acc += &t;
        } else {
            acc -= &t;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tc(p: i64, q: u64) -> ExactNumber {
        ExactNumber::two_cos(p, q)
    }

    #[test]
    fn det_matches_cofactor() {
        let m = Matrix::from_fn(4, 4, |i, j| {
            if i == j { ExactNumber::from_int(2) } else { &tc((i + 2 * j) as i64, 5) - &ExactNumber::from_int(i as i64) }
        });
        assert_eq!(m.det(), cofactor_det(&m));
        let z = Matrix::from_ints(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]);
        assert_eq!(z.det(), cofactor_det(&z));
        assert_eq!(z.det(), ExactNumber::from_int(-2));
    }

    #[test]
    fn inverse_rank_kernel() {
        let m = Matrix::from_ints(&[&[2, 1], &[1, 2]]);
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).is_identity());
        let s = Matrix::from_ints(&[&[2, 2, 2], &[2, 2, 2], &[2, 2, 2]]);
        assert_eq!(s.rank(), 1);
        assert_eq!(s.inverse(), Err(Error::Singular));
        let k = s.kernel();
        assert_eq!(k.len(), 2);
        for v in k {
            assert!(s.mul_vec(&v).iter().all(|x| x.is_zero()));
        }
        let x = m.solve(&[ExactNumber::from_int(3), ExactNumber::from_int(3)]).unwrap();
        assert_eq!(x, vec![ExactNumber::one(), ExactNumber::one()]);
    }
}
