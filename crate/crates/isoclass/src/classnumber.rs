//! Relative class numbers of prime cyclotomic fields and conjugacy-class
//! counts.
//!
//! For an odd prime p the relative class number is
//!
//! ```text
//! h-(p) = 2p * prod_{chi odd mod p} (-B_{1,chi} / 2)
//! ```
//!
//! with `B_{1,chi} = (1/p) sum_a chi(a) a`. Fixing a primitive root g mod p
//! and writing `f(x) = sum_i R(g^i) x^i`, the product of the Bernoulli
//! numbers over the odd characters is `Res(x^m + 1, f(x)) / p^m` with
//! `m = (p-1)/2`, because the odd characters evaluate `f` exactly at the
//! roots of `x^m + 1`. Folding `f` modulo `x^m + 1` (which sends the
//! coefficient list to `2 R(g^i) - p`) turns the resultant into the
//! determinant of an m x m negacyclic integer matrix, computed exactly by
//! fraction-free elimination. All arithmetic is exact; the final division
//! by `(2p)^(m-1)` is asserted to be integral.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::arith::is_odd_prime;
use crate::unimodular::SignatureCollection;
use crate::{Error, Result};

/// Largest prime supported by [`relative_class_number`].
pub const MAX_P: i64 = 199;

/// A computed relative class number `h-(Q(zeta_p))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelativeClassNumber {
    pub p: i64,
    pub value: BigUint,
}

impl RelativeClassNumber {
    pub fn compute(p: i64) -> Result<Self> {
        Ok(RelativeClassNumber {
            p,
            value: relative_class_number(p)?,
        })
    }
}

/// Exact relative class number of the p-th cyclotomic field, `p <= 199`.
#[allow(clippy::needless_range_loop)]
pub fn relative_class_number(p: i64) -> Result<BigUint> {
    if !is_odd_prime(p) {
        return Err(Error::arg(format!("{p} is not an odd prime")));
    }
    if p > MAX_P {
        return Err(Error::unsupported(format!(
            "relative class numbers are supported for p <= {MAX_P}"
        )));
    }
    let m = ((p - 1) / 2) as usize;
    let g = primitive_root(p);

    // Folded coefficients: F_i = 2 R(g^i) - p for i < m, using
    // R(g^(i+m)) = p - R(g^i).
    let mut folded = Vec::with_capacity(m);
    let mut power: i64 = 1;
    for _ in 0..m {
        folded.push(BigInt::from(2 * power - p));
        power = power * g % p;
    }

    // Negacyclic matrix of multiplication by F in Z[x]/(x^m + 1):
    // column j holds the coefficients of x^j * F(x).
    let mut matrix = vec![vec![BigInt::zero(); m]; m];
    for j in 0..m {
        for i in 0..m {
            let target = i + j;
            if target < m {
                matrix[target][j] = folded[i].clone();
            } else {
                matrix[target - m][j] = -folded[i].clone();
            }
        }
    }
    let det = bareiss_determinant(matrix);

    // h- = (-1)^m det / (2p)^(m-1)
    let sign = if m.is_multiple_of(2) { 1 } else { -1 };
    let numerator = det * BigInt::from(sign);
    let denom = BigInt::from(2 * p).pow((m - 1) as u32);
    let (quotient, remainder) = numerator.div_rem(&denom);
    assert!(
        remainder.is_zero(),
        "relative class number must be integral"
    );
    assert!(
        quotient.is_positive(),
        "relative class number must be positive"
    );
    Ok(quotient.to_biguint().expect("positive"))
}

fn primitive_root(p: i64) -> i64 {
    let phi = (p - 1) as u64;
    let factors = crate::arith::Factorization::of(phi).expect("p - 1 >= 2");
    'next: for g in 2..p {
        for &(q, _) in factors.pairs() {
            if pow_mod(g as u64, phi / q, p as u64) == 1 {
                continue 'next;
            }
        }
        return g;
    }
    unreachable!("every prime has a primitive root")
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

/// Fraction-free (Bareiss) determinant of an integer matrix.
fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut sign = 1i64;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Number of isometry classes in the genus of the invariant lattice, for
/// the six unimodular ambient genera of ranks 6, 8, 10, 22, 24 and 26.
///
/// Unique except in `II_(4,20)` at `(p, n, m) = (23, 1, 0)`, where the
/// invariant lattice is one of two classes.
pub fn invariant_genus_class_count(l_plus: u32, l_minus: u32, p: i64, n: i64, m: i64) -> u64 {
    if (l_plus, l_minus) == (4, 20) && (p, n, m) == (23, 1, 0) {
        2
    } else {
        1
    }
}

/// Conjugacy classes with fixed signature collection and invariant lattice
/// data: `sig_count * invariant_classes * h-(p)`.
pub fn conjugacy_class_count(p: i64, sig_count: u64, invariant_classes: u64) -> Result<BigUint> {
    let h = relative_class_number(p)?;
    Ok(h * BigUint::from(sig_count) * BigUint::from(invariant_classes))
}

/// Convenience wrapper taking an explicit signature collection list.
pub fn conjugacy_class_count_for(
    p: i64,
    collections: &[SignatureCollection],
    invariant_classes: u64,
) -> Result<BigUint> {
    conjugacy_class_count(p, collections.len() as u64, invariant_classes)
}
