//! Exact arithmetic in cyclotomic fields.
//!
//! An [`ExactNumber`] is an element of Q(ζ_m) stored as rational coordinates in
//! the power basis 1, ζ, …, ζ^{φ(m)-1} modulo the m-th cyclotomic polynomial.
//! Every value is kept at its minimal conductor, so structural equality is
//! field equality and the byte encoding is canonical.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{gcd, lcm, mod_inverse, prime_factors};
use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer coefficients of Φ_m, lowest degree first.
pub fn cyclotomic_coeffs(m: u64) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&m) {
        return p.clone();
    }
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in crate::arith::divisors(m) {
        if d == m {
            continue;
        }
        let div = cyclotomic_coeffs(d);
        num = exact_int_div(&num, &div);
    }
    let arc = Arc::new(num);
    cache.lock().unwrap().insert(m, arc.clone());
    arc
}

fn exact_int_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let mut quot = vec![0i64; num.len() - dn];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dn];
        quot[k] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[k + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    quot
}

/// Reduce a coefficient vector (any length) modulo Φ_m, returning φ(m) coefficients.
fn reduce_mod(mut v: Vec<Rational>, m: u64) -> Vec<Rational> {
    let phi = cyclotomic_coeffs(m);
    let deg = phi.len() - 1;
    if v.len() <= deg {
        v.resize(deg, Rational::zero());
        return v;
    }
    for k in (deg..v.len()).rev() {
        if v[k].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut v[k], Rational::zero());
        let base = k - deg;
        for (j, &f) in phi[..deg].iter().enumerate() {
            if f != 0 {
                let t = &c * rat(f);
                v[base + j] -= t;
            }
        }
    }
    v.truncate(deg);
    v
}

/// Element of a cyclotomic field at its minimal conductor.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactNumber {
    conductor: u64,
    coeffs: Vec<Rational>,
}

impl Hash for ExactNumber {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.conductor.hash(state);
        self.coeffs.hash(state);
    }
}

impl ExactNumber {
    pub fn zero() -> Self {
        ExactNumber { conductor: 1, coeffs: vec![Rational::zero()] }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat(n))
    }

    pub fn from_rational(r: Rational) -> Self {
        ExactNumber { conductor: 1, coeffs: vec![r] }
    }

    /// Builds Σ coeffs[k] ζ_m^k (any number of coefficients) and reduces it.
    pub fn from_coeffs(m: u64, coeffs: Vec<Rational>) -> Self {
        assert!(m >= 1, "conductor must be positive");
        let v = reduce_mod(coeffs, m);
        Self::canonical(m, v)
    }

    /// ζ_m^k for a primitive m-th root of unity ζ_m = exp(2πi/m).
    pub fn root_of_unity(m: u64, k: i64) -> Self {
        let e = k.rem_euclid(m as i64) as usize;
        let mut v = vec![Rational::zero(); e + 1];
        v[e] = Rational::one();
        Self::from_coeffs(m, v)
    }

    /// The exact value 2cos(πp/q) = ζ^p + ζ^{-p} with ζ a primitive 2q-th root.
    pub fn two_cos(p: i64, q: u64) -> Self {
        assert!(q >= 1, "two_cos needs q >= 1");
        let m = 2 * q;
        let a = p.rem_euclid(m as i64) as usize;
        let b = (m as usize - a) % m as usize;
        let mut v = vec![Rational::zero(); m as usize];
        v[a] += Rational::one();
        v[b] += Rational::one();
        Self::from_coeffs(m, v)
    }

    /// Positive square root of a non-negative rational, when it lies in a
    /// cyclotomic field (always true; limited only by factoring effort).
    pub fn sqrt_rational(r: &Rational) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::UnsupportedSqrt(format!("{r} is negative")));
        }
        if r.is_zero() {
            return Ok(Self::zero());
        }
        let prod = r.numer() * r.denom();
        let prod = prod
            .to_u64()
            .filter(|&x| x <= 1_000_000_000_000)
            .ok_or_else(|| Error::UnsupportedSqrt(format!("{r} is too large to factor")))?;
        let mut square = 1u64;
        let mut free = 1u64;
        let mut n = prod;
        let mut p = 2u64;
        while p * p <= n {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            square *= p.pow(e / 2);
            if e % 2 == 1 {
                free *= p;
            }
            p += 1;
        }
        free *= n;
        let mut out = Self::from_rational(Rational::new(
            BigInt::from(square),
            r.denom().clone(),
        ));
        for p in prime_factors(free) {
            out = &out * &Self::sqrt_prime(p);
        }
        Ok(out)
    }

    fn sqrt_prime(p: u64) -> Self {
        if p == 2 {
            return Self::two_cos(1, 4);
        }
        // Quadratic Gauss sum g with g² = (−1)^{(p−1)/2} p.
        let mut v = vec![Rational::zero(); p as usize];
        for a in 1..p {
            let legendre = pow_mod(a, (p - 1) / 2, p);
            v[a as usize] = if legendre == 1 { rat(1) } else { rat(-1) };
        }
        let g = Self::from_coeffs(p, v);
        let root = if p % 4 == 1 { g } else { &Self::root_of_unity(4, -1) * &g };
        if root.to_f64() < 0.0 {
            -root
        } else {
            root
        }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coordinates after promotion to conductor `m` (a multiple of the conductor).
    pub fn coeffs_at(&self, m: u64) -> Vec<Rational> {
        assert!(m % self.conductor == 0, "target conductor must be a multiple");
        if m == self.conductor {
            return self.coeffs.clone();
        }
        let step = (m / self.conductor) as usize;
        let mut v = vec![Rational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[k * step] = c.clone();
        }
        reduce_mod(v, m)
    }

    pub fn is_zero(&self) -> bool {
        self.conductor == 1 && self.coeffs[0].is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.conductor == 1 && self.coeffs[0].is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.conductor == 1
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.coeffs[0].clone())
    }

    pub fn to_integer(&self) -> Option<i64> {
        self.to_rational().filter(|r| r.is_integer()).and_then(|r| r.to_integer().to_i64())
    }

    /// Image under ζ ↦ ζ^{-1} (complex conjugation).
    pub fn conj(&self) -> Self {
        if self.is_rational() {
            return self.clone();
        }
        let m = self.conductor as usize;
        let mut v = vec![Rational::zero(); m];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[(m - k) % m] += c;
        }
        Self::from_coeffs(self.conductor, v)
    }

    pub fn is_real(&self) -> bool {
        self.is_rational() || self.conj() == *self
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.to_rational() {
            return Ok(Self::from_rational(r.recip()));
        }
        let modulus: Vec<Rational> =
            cyclotomic_coeffs(self.conductor).iter().map(|&c| rat(c)).collect();
        let s = poly_inverse_mod(&self.coeffs, &modulus).ok_or(Error::DivisionByZero)?;
        Ok(Self::from_coeffs(self.conductor, s))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Complex embedding with ζ_m = exp(2πi/m).
    pub fn to_complex(&self) -> (f64, f64) {
        let m = self.conductor as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let x = c.to_f64().unwrap_or(f64::NAN);
            let t = 2.0 * std::f64::consts::PI * k as f64 / m;
            re += x * t.cos();
            im += x * t.sin();
        }
        (re, im)
    }

    /// Real part of the complex embedding.
    pub fn to_f64(&self) -> f64 {
        self.to_complex().0
    }

    /// Sign of a real value, decided exactly when rational and by the
    /// certified decimal expansion otherwise.
    pub fn signum(&self) -> Result<i32> {
        if let Some(r) = self.to_rational() {
            return Ok(if r.is_zero() { 0 } else if r.is_positive() { 1 } else { -1 });
        }
        if !self.is_real() {
            return Err(Error::NotReal);
        }
        let f = self.to_f64();
        if f.abs() > 1e-9 {
            return Ok(if f > 0.0 { 1 } else { -1 });
        }
        let (lo, hi) = interval(self, 256);
        Ok(if lo.is_positive() {
            1
        } else if hi.is_negative() {
            -1
        } else {
            // A non-zero irrational value narrower than 2^-250 cannot occur for
            // the small entries handled here; refine once more to be safe.
            let (lo, _) = interval(self, 2048);
            if lo.is_positive() { 1 } else { -1 }
        })
    }

    /// Correctly rounded decimal string with `digits` places after the point.
    pub fn approx(&self, digits: u32) -> Result<String> {
        if !self.is_real() {
            return Err(Error::NotReal);
        }
        let scale = BigInt::from(10u32).pow(digits);
        let rounded = if let Some(r) = self.to_rational() {
            round_half_away(&(r * Rational::from_integer(scale.clone())))
        } else {
            let mut bits = 4 * digits as u64 + 64;
            loop {
                let (lo, hi) = interval(self, bits);
                let s = Rational::from_integer(scale.clone());
                let a = round_half_away(&(lo * &s));
                let b = round_half_away(&(hi * &s));
                if a == b {
                    break a;
                }
                bits += 64;
            }
        };
        Ok(format_scaled(&rounded, digits))
    }

    /// Canonical byte encoding used for hashing and ordering.
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 + 8 * self.coeffs.len());
        self.write_key(&mut out);
        out
    }

    pub fn write_key(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&(self.conductor as u32).to_be_bytes());
        for c in &self.coeffs {
            out.push(sign_class(c));
            for part in [c.numer(), c.denom()] {
                let (_, bytes) = part.to_bytes_be();
                out.extend_from_slice(&(bytes.len() as u32).to_be_bytes());
                out.extend_from_slice(&bytes);
            }
        }
    }

    /// Parses the expression grammar used by matrix files and the CLI.
    pub fn parse(text: &str) -> Result<Self> {
        Parser { s: text.as_bytes(), pos: 0 }.expr()
    }

    /// Renders a real value in the expression grammar, as a rational
    /// combination of 1 and 2cos(2πk/m), k < φ(m)/2.
    pub fn format_expr(&self) -> Result<String> {
        if let Some(r) = self.to_rational() {
            return Ok(r.to_string());
        }
        if !self.is_real() {
            return Err(Error::NotReal);
        }
        let m = self.conductor;
        let half = self.coeffs.len() / 2;
        let basis: Vec<Vec<Rational>> = (0..half)
            .map(|k| {
                if k == 0 {
                    Self::one().coeffs_at(m)
                } else {
                    let mut v = vec![Rational::zero(); m as usize];
                    v[k] += Rational::one();
                    v[m as usize - k] += Rational::one();
                    reduce_mod(v, m)
                }
            })
            .collect();
        let weights = solve_columns(&basis, &self.coeffs).ok_or(Error::NotReal)?;
        let mut terms: Vec<(Rational, Option<(u64, u64)>)> = Vec::new();
        for (k, w) in weights.into_iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            if k == 0 {
                terms.push((w, None));
            } else {
                let g = gcd(2 * k as u64, m);
                terms.push((w, Some((2 * k as u64 / g, m / g))));
            }
        }
        let mut s = String::new();
        for (i, (w, atom)) in terms.iter().enumerate() {
            let neg = w.is_negative();
            let mag = w.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            match atom {
                None => s.push_str(&mag.to_string()),
                Some((p, q)) => {
                    if !mag.is_one() {
                        s.push_str(&mag.to_string());
                        s.push('*');
                    }
                    s.push_str(&format!("2cos(pi*{p}/{q})"));
                }
            }
        }
        Ok(s)
    }

    fn canonical(m: u64, coeffs: Vec<Rational>) -> Self {
        if coeffs.iter().skip(1).all(|c| c.is_zero()) {
            return ExactNumber { conductor: 1, coeffs: vec![coeffs[0].clone()] };
        }
        let mut m = m;
        let mut coeffs = coeffs;
        'outer: loop {
            for p in prime_factors(m) {
                if let Some((d, c)) = try_descend(m, &coeffs, p) {
                    m = d;
                    coeffs = c;
                    continue 'outer;
                }
            }
            break;
        }
        if m == 1 || coeffs.iter().skip(1).all(|c| c.is_zero()) {
            return ExactNumber { conductor: 1, coeffs: vec![coeffs[0].clone()] };
        }
        ExactNumber { conductor: m, coeffs }
    }

    fn binary(&self, other: &Self, op: impl Fn(&[Rational], &[Rational], u64) -> Vec<Rational>) -> Self {
        if self.conductor == other.conductor {
            let v = op(&self.coeffs, &other.coeffs, self.conductor);
            return Self::canonical(self.conductor, v);
        }
        let m = lcm(self.conductor, other.conductor);
        let a = self.coeffs_at(m);
        let b = other.coeffs_at(m);
        Self::canonical(m, op(&a, &b, m))
    }
}

/// Tries to express an element of Q(ζ_m) in Q(ζ_{m/p}).
fn try_descend(m: u64, c: &[Rational], p: u64) -> Option<(u64, Vec<Rational>)> {
    let d = m / p;
    if d % p == 0 {
        // Φ_m(x) = Φ_d(x^p): the element lies in the subfield iff only powers
        // divisible by p occur.
        if c.iter().enumerate().any(|(k, v)| k as u64 % p != 0 && !v.is_zero()) {
            return None;
        }
        return Some((d, c.iter().step_by(p as usize).cloned().collect()));
    }
    // p exactly divides m: Q(ζ_m) = Q(ζ_d)(ζ_p) with ζ_m = ζ_p^α ζ_d^β.
    let alpha = mod_inverse(d % p, p);
    let beta = if d == 1 { 0 } else { mod_inverse(p % d, d) };
    let mut y = vec![vec![Rational::zero(); d as usize]; p as usize];
    for (k, v) in c.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let k = k as u64;
        y[((alpha * k) % p) as usize][((beta * k) % d) as usize] += v;
    }
    let y: Vec<Vec<Rational>> = y.into_iter().map(|v| reduce_mod(v, d)).collect();
    let last = &y[p as usize - 1];
    if y[1..p as usize - 1].iter().any(|yj| yj != last) {
        return None;
    }
    Some((d, y[0].iter().zip(last).map(|(a, b)| a - b).collect()))
}

fn add_vec(a: &[Rational], b: &[Rational], _m: u64) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub_vec(a: &[Rational], b: &[Rational], _m: u64) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn mul_vec(a: &[Rational], b: &[Rational], m: u64) -> Vec<Rational> {
    if m == 1 {
        return vec![&a[0] * &b[0]];
    }
    let mut v = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                v[i + j] += x * y;
            }
        }
    }
    reduce_mod(v, m)
}

fn sign_class(c: &Rational) -> u8 {
    match c.numer().sign() {
        Sign::NoSign => 0,
        Sign::Plus => 1,
        Sign::Minus => 2,
    }
}

fn cmp_rational_key(a: &Rational, b: &Rational) -> Ordering {
    sign_class(a)
        .cmp(&sign_class(b))
        .then_with(|| cmp_magnitude(a.numer(), b.numer()))
        .then_with(|| cmp_magnitude(a.denom(), b.denom()))
}

fn cmp_magnitude(a: &BigInt, b: &BigInt) -> Ordering {
    let (_, x) = a.to_bytes_be();
    let (_, y) = b.to_bytes_be();
    x.len().cmp(&y.len()).then_with(|| x.cmp(&y))
}

impl Ord for ExactNumber {
    /// Order of the canonical encodings: conductor first, then coefficients,
    /// each ranked zero < positive < negative and then by magnitude.
    fn cmp(&self, other: &Self) -> Ordering {
        self.conductor.cmp(&other.conductor).then_with(|| {
            for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
                let o = cmp_rational_key(a, b);
                if o != Ordering::Equal {
                    return o;
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for ExactNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Default for ExactNumber {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for ExactNumber {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<Rational> for ExactNumber {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $f:expr) => {
        impl $trait<&ExactNumber> for &ExactNumber {
            type Output = ExactNumber;
            fn $method(self, rhs: &ExactNumber) -> ExactNumber {
                if self.conductor == 1 && rhs.conductor == 1 {
                    let f: fn(&Rational, &Rational) -> Rational = $f;
                    return ExactNumber::from_rational(f(&self.coeffs[0], &rhs.coeffs[0]));
                }
                self.binary(rhs, forward_binop!(@vec $method))
            }
        }
        impl $trait<ExactNumber> for ExactNumber {
            type Output = ExactNumber;
            fn $method(self, rhs: ExactNumber) -> ExactNumber {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&ExactNumber> for ExactNumber {
            type Output = ExactNumber;
            fn $method(self, rhs: &ExactNumber) -> ExactNumber {
                (&self).$method(rhs)
            }
        }
        impl $trait<ExactNumber> for &ExactNumber {
            type Output = ExactNumber;
            fn $method(self, rhs: ExactNumber) -> ExactNumber {
                self.$method(&rhs)
            }
        }
    };
    (@vec add) => { add_vec };
    (@vec sub) => { sub_vec };
    (@vec mul) => { mul_vec };
}

forward_binop!(Add, add, |a, b| a + b);
forward_binop!(Sub, sub, |a, b| a - b);
forward_binop!(Mul, mul, |a, b| a * b);

impl Neg for &ExactNumber {
    type Output = ExactNumber;
    fn neg(self) -> ExactNumber {
        ExactNumber { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for ExactNumber {
    type Output = ExactNumber;
    fn neg(self) -> ExactNumber {
        -&self
    }
}

impl AddAssign<&ExactNumber> for ExactNumber {
    fn add_assign(&mut self, rhs: &ExactNumber) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&ExactNumber> for ExactNumber {
    fn sub_assign(&mut self, rhs: &ExactNumber) {
        *self = &*self - rhs;
    }
}

impl fmt::Display for ExactNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.format_expr() {
            Ok(s) => f.write_str(&s),
            Err(_) => {
                write!(f, "cyc{}[", self.conductor)?;
                for (i, c) in self.coeffs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str("]")
            }
        }
    }
}

impl fmt::Debug for ExactNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Inverse of `a` modulo the monic polynomial `f` over Q, via extended Euclid.
fn poly_inverse_mod(a: &[Rational], f: &[Rational]) -> Option<Vec<Rational>> {
    fn trim(v: &mut Vec<Rational>) {
        while v.len() > 1 && v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
    }
    fn divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
        let mut r = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let lead = b[db].clone();
        if r.len() < b.len() {
            return (vec![Rational::zero()], r);
        }
        let mut q = vec![Rational::zero(); r.len() - db];
        for k in (0..q.len()).rev() {
            let c = &r[k + db] / &lead;
            if !c.is_zero() {
                for (j, bj) in b.iter().enumerate() {
                    let t = &c * bj;
                    r[k + j] -= t;
                }
            }
            q[k] = c;
        }
        r.truncate(db.max(1));
        trim(&mut r);
        (q, r)
    }
    fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                v[i + j] += x * y;
            }
        }
        v
    }
    fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let n = a.len().max(b.len());
        let mut v = vec![Rational::zero(); n];
        for (i, x) in a.iter().enumerate() {
            v[i] += x;
        }
        for (i, y) in b.iter().enumerate() {
            v[i] -= y;
        }
        trim(&mut v);
        v
    }
    let mut r0 = f.to_vec();
    let mut r1 = a.to_vec();
    trim(&mut r1);
    let mut s0 = vec![Rational::zero()];
    let mut s1 = vec![Rational::one()];
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = divrem(&r0, &r1);
        let s = sub(&s0, &mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    if r0.len() != 1 {
        return None;
    }
    let c = r0[0].recip();
    Some(s0.into_iter().map(|x| x * &c).collect())
}

/// Solves Σ w_k basis[k] = target for rational weights (columns independent).
fn solve_columns(basis: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let rows = target.len();
    let cols = basis.len();
    let mut a: Vec<Vec<Rational>> = (0..rows)
        .map(|r| {
            let mut row: Vec<Rational> = basis.iter().map(|b| b[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        let Some(p) = (pivot_row..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(pivot_row, p);
        let inv = a[pivot_row][c].recip();
        for x in a[pivot_row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..rows {
            if r != pivot_row && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for k in 0..=cols {
                    let t = &f * &a[pivot_row][k];
                    a[r][k] -= t;
                }
            }
        }
        pivots.push(c);
        pivot_row += 1;
    }
    if (pivot_row..rows).any(|r| !a[r][cols].is_zero()) {
        return None;
    }
    let mut w = vec![Rational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        w[c] = a[r][cols].clone();
    }
    Some(w)
}

fn round_half_away(x: &Rational) -> BigInt {
    let two = BigInt::from(2);
    let n = x.numer();
    let d = x.denom();
    let q = (n.abs() * &two + d).div_floor(&(d * &two));
    if n.is_negative() {
        -q
    } else {
        q
    }
}

fn format_scaled(v: &BigInt, digits: u32) -> String {
    let neg = v.is_negative() && !v.is_zero();
    let s = v.abs().to_string();
    let d = digits as usize;
    let s = if s.len() <= d { format!("{}{}", "0".repeat(d + 1 - s.len()), s) } else { s };
    let (int_part, frac) = s.split_at(s.len() - d);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(int_part);
    if d > 0 {
        out.push('.');
        out.push_str(frac);
    }
    out
}

/// Rigorous enclosure of the real part of `a` with working precision `bits`.
fn interval(a: &ExactNumber, bits: u64) -> (Rational, Rational) {
    let guard = bits + 16;
    let one = BigInt::one() << guard;
    let pi = fixed_pi(guard);
    let m = a.conductor;
    let mut sum = BigInt::zero();
    let mut err = BigInt::zero();
    let cos_err = BigInt::from(1u64 << 20);
    for (k, c) in a.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let k = k as u64;
        let kk = k.min(m - k);
        // angle 2π·kk/m ∈ [0, π]
        let theta = (&pi * BigInt::from(2 * kk)) / BigInt::from(m);
        let cos = fixed_cos(&theta, guard, &one);
        let term = (&cos * c.numer()).div_floor(c.denom());
        sum += term;
        let mag = (c.numer().abs() + c.denom() - 1u32) / c.denom();
        err += &cos_err * mag + 1u32;
    }
    let den = Rational::from_integer(one);
    let lo = Rational::from_integer(&sum - &err) / &den;
    let hi = Rational::from_integer(&sum + &err) / &den;
    (lo, hi)
}

fn fixed_atan_inv(n: u64, one: &BigInt) -> BigInt {
    // atan(1/n) = Σ (−1)^k / ((2k+1) n^{2k+1})
    let n2 = BigInt::from(n * n);
    let mut power = one / BigInt::from(n);
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &n2;
        k += 1;
    }
    sum
}

fn fixed_pi(bits: u64) -> BigInt {
    let one = BigInt::one() << (bits + 8);
    let pi = BigInt::from(16) * fixed_atan_inv(5, &one) - BigInt::from(4) * fixed_atan_inv(239, &one);
    pi >> 8
}

fn fixed_cos(theta: &BigInt, bits: u64, one: &BigInt) -> BigInt {
    let theta2 = (theta * theta) >> bits;
    let mut term = one.clone();
    let mut sum = one.clone();
    let mut j = 0u64;
    loop {
        term = (&term * &theta2) >> bits;
        term /= BigInt::from((2 * j + 1) * (2 * j + 2));
        if term.is_zero() {
            break;
        }
        if j % 2 == 0 {
            sum -= &term;
        } else {
            sum += &term;
        }
        j += 1;
    }
    sum
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { position: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn starts_with(&self, lit: &str) -> bool {
        self.s[self.pos..].starts_with(lit.as_bytes())
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        self.skip_ws();
        if self.starts_with(lit) {
            self.pos += lit.len();
            Ok(())
        } else {
            self.err(format!("expected '{lit}'"))
        }
    }

    fn expr(&mut self) -> Result<ExactNumber> {
        self.skip_ws();
        if self.peek().is_none() {
            return self.err("empty expression");
        }
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            match self.peek() {
                None => return Ok(acc),
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                Some(_) => return self.err("expected '+' or '-'"),
            }
        }
    }

    fn term(&mut self) -> Result<ExactNumber> {
        self.skip_ws();
        let mut negate = false;
        if self.peek() == Some(b'-') {
            negate = true;
            self.pos += 1;
            self.skip_ws();
        }
        let value = if self.is_atom_start() {
            self.atom()?
        } else {
            let r = self.rational()?;
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                self.skip_ws();
                if !self.is_atom_start() {
                    return self.err("expected 2cos(...) or sqrt(...) after '*'");
                }
                &ExactNumber::from_rational(r) * &self.atom()?
            } else {
                ExactNumber::from_rational(r)
            }
        };
        Ok(if negate { -value } else { value })
    }

    fn is_atom_start(&self) -> bool {
        self.starts_with("2cos(") || self.starts_with("sqrt(")
    }

    fn atom(&mut self) -> Result<ExactNumber> {
        if self.starts_with("2cos(") {
            self.pos += 5;
            self.expect("pi")?;
            self.expect("*")?;
            self.skip_ws();
            let p = self.integer(true)?;
            self.expect("/")?;
            self.skip_ws();
            let at = self.pos;
            let q = self.integer(false)?;
            if q == 0 {
                return Err(Error::Syntax { position: at, message: "q must be positive".into() });
            }
            self.expect(")")?;
            Ok(ExactNumber::two_cos(p, q as u64))
        } else {
            self.pos += 5;
            self.skip_ws();
            let at = self.pos;
            if self.peek() == Some(b'-') {
                return self.err("sqrt argument must be non-negative");
            }
            let r = self.rational()?;
            self.expect(")")?;
            ExactNumber::sqrt_rational(&r).map_err(|e| match e {
                Error::UnsupportedSqrt(m) => Error::Syntax { position: at, message: m },
                other => other,
            })
        }
    }

    fn digits(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        Ok(txt.parse::<BigInt>().expect("digits parse"))
    }

    fn integer(&mut self, signed: bool) -> Result<i64> {
        let neg = signed && self.peek() == Some(b'-');
        if neg {
            self.pos += 1;
        }
        let at = self.pos;
        let v = self.digits()?;
        let v = v.to_i64().ok_or(Error::Syntax { position: at, message: "integer too large".into() })?;
        Ok(if neg { -v } else { v })
    }

    fn rational(&mut self) -> Result<Rational> {
        let neg = self.peek() == Some(b'-');
        if neg {
            self.pos += 1;
        }
        let n = self.digits()?;
        let mut d = BigInt::one();
        if self.peek() == Some(b'/') && self.s.get(self.pos + 1).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
            let at = self.pos;
            d = self.digits()?;
            if d.is_zero() {
                return Err(Error::Syntax { position: at, message: "zero denominator".into() });
            }
        }
        let r = Rational::new(n, d);
        Ok(if neg { -r } else { r })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tc(p: i64, q: u64) -> ExactNumber {
        ExactNumber::two_cos(p, q)
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_coeffs(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_coeffs(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_coeffs(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_coeffs(105).iter().filter(|&&c| c == -2).count(), 2);
    }

    #[test]
    fn two_cos_trivial_values() {
        assert_eq!(tc(1, 3), ExactNumber::one());
        assert_eq!(tc(1, 2), ExactNumber::zero());
        assert_eq!(tc(0, 7), ExactNumber::from_int(2));
        assert_eq!(tc(1, 1), ExactNumber::from_int(-2));
    }

    #[test]
    fn golden_ratio_minimal_polynomial() {
        let g = tc(1, 5);
        assert_eq!(&g * &g, &g + &ExactNumber::one());
        assert!(g.to_f64() > 0.0);
        assert_eq!(g.conductor(), 5);
    }

    #[test]
    fn products_from_product_to_sum() {
        // 2cosA·2cosB = 2cos(A+B) + 2cos(A−B)
        assert_eq!(&tc(1, 5) * &tc(2, 5), ExactNumber::one());
        assert_eq!(&tc(1, 4) * &tc(1, 4), ExactNumber::from_int(2));
        for (a, b, q) in [(1, 2, 7), (3, 5, 9), (1, 1, 12), (2, 5, 15)] {
            assert_eq!(&tc(a, q) * &tc(b, q), &tc(a + b, q) + &tc(a - b, q));
        }
    }

    #[test]
    fn inversion() {
        assert_eq!(ExactNumber::from_int(2).inv().unwrap(), ExactNumber::from_rational(ratio(1, 2)));
        for (p, q) in [(1, 5), (1, 7), (2, 9), (1, 12)] {
            let x = &tc(p, q) + &ExactNumber::from_rational(ratio(1, 3));
            assert!((&x * &x.inv().unwrap()).is_one());
        }
        assert_eq!(ExactNumber::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn sqrt_identities() {
        assert_eq!(ExactNumber::sqrt_rational(&rat(2)).unwrap(), tc(1, 4));
        assert_eq!(ExactNumber::sqrt_rational(&rat(3)).unwrap(), tc(1, 6));
        let s5 = &(&tc(1, 5) * &ExactNumber::from_int(2)) - &ExactNumber::one();
        assert_eq!(ExactNumber::sqrt_rational(&rat(5)).unwrap(), s5);
        for r in [7, 12, 30, 11] {
            let s = ExactNumber::sqrt_rational(&rat(r)).unwrap();
            assert_eq!(&s * &s, ExactNumber::from_int(r));
            assert!(s.to_f64() > 0.0);
        }
        let s = ExactNumber::sqrt_rational(&ratio(9, 8)).unwrap();
        assert_eq!(&s * &s, ExactNumber::from_rational(ratio(9, 8)));
    }

    #[test]
    fn parse_examples() {
        assert_eq!(ExactNumber::parse("2cos(pi*2/5)").unwrap(), tc(2, 5));
        assert_eq!(ExactNumber::parse("-1").unwrap(), -ExactNumber::one());
        let want = &tc(1, 5) + &ExactNumber::from_rational(ratio(1, 2));
        assert_eq!(ExactNumber::parse("1/2 + 2cos(pi*1/5)").unwrap(), want);
        assert_eq!(ExactNumber::parse(" 3/4*sqrt(2) - 1 ").unwrap(), &(&tc(1, 4) * &ExactNumber::from_rational(ratio(3, 4))) - &ExactNumber::one());
        assert!(matches!(ExactNumber::parse("2cos(pi*1/0)"), Err(Error::Syntax { .. })));
        match ExactNumber::parse("1 + x") {
            Err(Error::Syntax { position, .. }) => assert_eq!(position, 4),
            other => panic!("{other:?}"),
        }
        assert!(ExactNumber::parse("").is_err());
        assert!(ExactNumber::parse("sqrt(-2)").is_err());
    }

    #[test]
    fn format_round_trip() {
        let cases = [
            tc(1, 5),
            tc(2, 5),
            tc(1, 4),
            &tc(1, 5) * &ExactNumber::from_rational(ratio(-3, 2)),
            &tc(1, 7) + &tc(3, 7),
            ExactNumber::sqrt_rational(&rat(5)).unwrap(),
            ExactNumber::from_rational(ratio(-7, 3)),
        ];
        for x in cases {
            let s = x.format_expr().unwrap();
            assert_eq!(ExactNumber::parse(&s).unwrap(), x, "{s}");
        }
        assert_eq!(tc(1, 4).format_expr().unwrap(), "2cos(pi*1/4)");
        assert_eq!(tc(1, 5).format_expr().unwrap(), "1 + 2cos(pi*2/5)");
        assert!(ExactNumber::root_of_unity(4, 1).format_expr().is_err());
    }

    #[test]
    fn approx_examples() {
        assert_eq!(tc(1, 5).approx(6).unwrap(), "1.618034");
        assert_eq!(ExactNumber::zero().approx(3).unwrap(), "0.000");
        assert_eq!(tc(1, 4).approx(6).unwrap(), "1.414214");
        assert_eq!(ExactNumber::from_rational(ratio(1, 8)).approx(2).unwrap(), "0.13");
        assert_eq!(ExactNumber::from_rational(ratio(-1, 8)).approx(2).unwrap(), "-0.13");
        assert_eq!((-tc(1, 7)).approx(30).unwrap(), "-1.801937735804838252472204639015");
        assert_eq!(ExactNumber::root_of_unity(4, 1).approx(3), Err(Error::NotReal));
    }

    #[test]
    fn encoding_orders_positive_before_negative() {
        let one = ExactNumber::one();
        assert!(one < -one.clone());
        assert!(ExactNumber::zero() < one);
        let g = tc(1, 5);
        assert_eq!(g.encode() < (-g.clone()).encode(), g < -g.clone());
    }

    #[test]
    fn minimal_conductor() {
        assert_eq!(tc(1, 6).conductor(), 12);
        assert_eq!(ExactNumber::root_of_unity(6, 1).conductor(), 3);
        assert_eq!(ExactNumber::root_of_unity(10, 3).conductor(), 5);
        let i = ExactNumber::root_of_unity(4, 1);
        assert_eq!((&i * &i), ExactNumber::from_int(-1));
        let x = &tc(1, 12) * &tc(1, 12);
        assert_eq!(x, &ExactNumber::from_int(2) + &tc(1, 6));
    }
}
