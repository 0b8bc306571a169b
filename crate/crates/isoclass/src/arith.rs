//! Exact number-theoretic primitives shared by all modules.
//!
//! Everything here is integer arithmetic: Legendre symbols, p-adic
//! valuations, the Möbius function and factorization by trial division.
//! Inputs in this crate stay far below 10^7, so trial division is exact
//! and fast enough.

use crate::{Error, Result};

/// Exact rational numbers with arbitrary-precision integer parts.
///
/// Always in lowest terms with positive denominator (maintained by the
/// underlying implementation).
pub type Rational = num_rational::BigRational;

/// A prime factorization: pairs `(prime, exponent)` with strictly
/// increasing primes and exponents >= 1. The product of `prime^exponent`
/// reconstructs the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pairs: Vec<(u64, u32)>,
}

impl Factorization {
    /// Factor `n >= 1` by trial division.
    pub fn of(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::arg("cannot factor 0"));
        }
        let mut pairs = Vec::new();
        let mut m = n;
        let mut d: u64 = 2;
        while d * d <= m {
            if m.is_multiple_of(d) {
                let mut e = 0;
                while m.is_multiple_of(d) {
                    m /= d;
                    e += 1;
                }
                pairs.push((d, e));
            }
            d += if d == 2 { 1 } else { 2 };
        }
        if m > 1 {
            pairs.push((m, 1));
        }
        Ok(Factorization { pairs })
    }

    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    pub fn value(&self) -> u64 {
        self.pairs
            .iter()
            .map(|&(p, e)| p.pow(e))
            .product::<u64>()
            .max(1)
    }
}

/// Is `n` an odd prime?
pub fn is_odd_prime(n: i64) -> bool {
    if n < 3 || n % 2 == 0 {
        return false;
    }
    let n = n as u64;
    let mut d: u64 = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Legendre symbol `(a/p)` for an odd prime `p`.
pub fn legendre(a: i64, p: i64) -> Result<i64> {
    if !is_odd_prime(p) {
        return Err(Error::arg(format!("{p} is not an odd prime")));
    }
    let r = a.rem_euclid(p);
    if r == 0 {
        return Ok(0);
    }
    // Euler's criterion: r^((p-1)/2) mod p is 1 or p-1.
    let s = pow_mod(r as u64, ((p - 1) / 2) as u64, p as u64);
    Ok(if s == 1 { 1 } else { -1 })
}

fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let m = modulus as u128;
    let mut acc: u128 = 1;
    let mut b = (base % modulus) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// p-adic valuation of a nonzero integer: the largest `e` with `p^e | n`.
pub fn valuation(n: i64, p: i64) -> Result<u32> {
    if n == 0 {
        return Err(Error::arg("valuation of 0 is undefined"));
    }
    if p < 2 {
        return Err(Error::arg(format!("{p} is not a prime")));
    }
    let mut m = n.unsigned_abs();
    let p = p as u64;
    let mut e = 0;
    while m.is_multiple_of(p) {
        m /= p;
        e += 1;
    }
    Ok(e)
}

/// Möbius function of `n >= 1`.
pub fn moebius(n: u64) -> Result<i64> {
    if n == 0 {
        return Err(Error::arg("moebius is defined for n >= 1"));
    }
    let f = Factorization::of(n)?;
    if f.pairs().iter().any(|&(_, e)| e > 1) {
        return Ok(0);
    }
    Ok(if f.pairs().len() % 2 == 0 { 1 } else { -1 })
}

/// `(-1/p)^exponent` as a sign, i.e. `+1` if `p = 1 mod 4` or the exponent
/// is even, else `-1`.
pub fn minus_one_power(p: i64, exponent: u32) -> Result<i64> {
    let chi = legendre(-1, p)?;
    Ok(if exponent.is_multiple_of(2) { 1 } else { chi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(1, 5).unwrap(), 1);
        assert_eq!(legendre(2, 5).unwrap(), -1);
        assert_eq!(legendre(-4, 5).unwrap(), 1);
        assert_eq!(legendre(0, 7).unwrap(), 0);
        assert_eq!(legendre(-3, 5).unwrap(), -1);
        assert!(legendre(1, 9).is_err());
        assert!(legendre(1, 2).is_err());
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(50, 5).unwrap(), 2);
        assert_eq!(valuation(7, 3).unwrap(), 0);
        assert_eq!(valuation(300, 5).unwrap(), 2);
        assert_eq!(valuation(-24, 2).unwrap(), 3);
        assert!(valuation(0, 5).is_err());
    }

    #[test]
    fn moebius_examples() {
        assert_eq!(moebius(1).unwrap(), 1);
        assert_eq!(moebius(4).unwrap(), 0);
        assert_eq!(moebius(6).unwrap(), 1);
        assert_eq!(moebius(30).unwrap(), -1);
        assert!(moebius(0).is_err());
    }

    #[test]
    fn moebius_divisor_sums_vanish() {
        // sum_{d|n} mu(d) = [n == 1], checked for n <= 10^4.
        for n in 1u64..=10_000 {
            let mut s = 0;
            let mut d = 1;
            while d * d <= n {
                if n % d == 0 {
                    s += moebius(d).unwrap();
                    if d != n / d {
                        s += moebius(n / d).unwrap();
                    }
                }
                d += 1;
            }
            assert_eq!(s, i64::from(n == 1), "n = {n}");
        }
    }

    #[test]
    fn factorization_roundtrip() {
        for n in 1u64..=2000 {
            let f = Factorization::of(n).unwrap();
            assert_eq!(f.value(), n);
            for w in f.pairs().windows(2) {
                assert!(w[0].0 < w[1].0);
            }
        }
    }

    proptest! {
        #[test]
        fn legendre_multiplicative(a in -200i64..200, b in -200i64..200) {
            for p in [3i64, 5, 7, 13] {
                let lhs = legendre(a * b, p).unwrap();
                let rhs = legendre(a, p).unwrap() * legendre(b, p).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn valuation_additive(a in 1i64..5000, b in 1i64..5000) {
            for p in [2i64, 3, 5, 7] {
                let lhs = valuation(a * b, p).unwrap();
                let rhs = valuation(a, p).unwrap() + valuation(b, p).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
