//! Small integer helpers shared by the field and polynomial code.

pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    let mut r = n;
    for p in prime_factors(n) {
        r = r / p * (p - 1);
    }
    r
}

/// Inverse of `a` modulo `m` (m ≥ 2, gcd(a, m) = 1).
pub fn mod_inverse(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "not invertible");
    old_s.rem_euclid(m as i128) as u64
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Largest N with φ(N) ≤ bound. Uses φ(N) ≥ √(N/2).
pub fn max_order_with_phi_at_most(bound: u64) -> u64 {
    let limit = 2 * bound * bound + 2;
    (1..=limit).filter(|&n| euler_phi(n) <= bound).max().unwrap_or(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_small_values() {
        let expect = [1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4];
        for (i, &e) in expect.iter().enumerate() {
            assert_eq!(euler_phi(i as u64 + 1), e);
        }
        assert_eq!(euler_phi(30), 8);
    }

    #[test]
    fn inverse_and_divisors() {
        assert_eq!(mod_inverse(3, 7), 5);
        assert_eq!(mod_inverse(1, 2), 1);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(max_order_with_phi_at_most(8), 30);
    }
}
