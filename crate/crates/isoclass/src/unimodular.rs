//! Existence of odd-prime-order isometries of unimodular lattices.
//!
//! The data of such an isometry `f` is carried by the signature
//! `(s+, s-)` of the coinvariant lattice `L_f` together with its
//! discriminant exponent `n` (`det L_f = +-p^n`). The rank of `L_f` is
//! `(n + 2m)(p-1)` for a nonnegative integer `m`; the API takes `n` and
//! derives `m`, rejecting non-integral values, because callers know
//! discriminants rather than hermitian ranks.

use serde::Serialize;

use crate::arith::is_odd_prime;
use crate::discforms::Parity;

/// Invariants of an order-p isometry of a unimodular lattice of signature
/// `(l+, l-)`: coinvariant signature `(s+, s-)` and `det L_f = +-p^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IsometryInvariants {
    pub p: i64,
    pub parity: Parity,
    pub l_plus: i64,
    pub l_minus: i64,
    pub s_plus: i64,
    pub s_minus: i64,
    pub n: i64,
}

impl IsometryInvariants {
    /// The hermitian multiplicity `m` with `s+ + s- = (n + 2m)(p - 1)`,
    /// if it is a nonnegative integer.
    pub fn m(&self) -> Option<i64> {
        let s = self.s_plus + self.s_minus;
        if self.p < 3 || s % (self.p - 1) != 0 {
            return None;
        }
        let q = s / (self.p - 1);
        if q < self.n || (q - self.n) % 2 != 0 {
            return None;
        }
        Some((q - self.n) / 2)
    }
}

/// Does a unimodular lattice of signature `(l+, l-)` and the given parity
/// admit an isometry of order `p` with coinvariant signature `(s+, s-)`
/// and discriminant `+-p^n`?
///
/// Total on all integer inputs; malformed invariants yield `false` so that
/// table enumerators can sweep raw ranges.
pub fn isometry_exists(inv: &IsometryInvariants) -> bool {
    let IsometryInvariants {
        p,
        parity,
        l_plus,
        l_minus,
        s_plus,
        s_minus,
        n,
    } = *inv;
    if !is_odd_prime(p) {
        return false;
    }
    if l_plus < 0 || l_minus < 0 || s_plus < 0 || s_minus < 0 || n < 0 {
        return false;
    }
    let s = s_plus + s_minus;
    let l = l_plus + l_minus;
    // (1): s = (n + 2m)(p-1) > 0 for some m >= 0
    if inv.m().is_none() || s == 0 {
        return false;
    }
    // (2): s+ and s- even
    if s_plus % 2 != 0 || s_minus % 2 != 0 {
        return false;
    }
    // (3)
    if s_plus > l_plus || s_minus > l_minus {
        return false;
    }
    // (4)
    if s + n > l {
        return false;
    }
    // (I) / (II)
    match parity {
        Parity::Odd => {
            if l - s <= 0 {
                return false;
            }
        }
        Parity::Even => {
            if (l_plus - l_minus).rem_euclid(8) != 0 {
                return false;
            }
        }
    }
    // (5)
    if (n == 0 || n == l - s) && (s_plus - s_minus).rem_euclid(8) != 0 {
        return false;
    }
    true
}

/// Does an even p-elementary lattice of signature `(s+, s-)` and
/// discriminant `p^n` admit a fixed-point-free isometry of order `p`
/// acting trivially on the discriminant group, with hermitian rank
/// `n + 2m`?
pub fn fixed_point_free_exists(p: i64, s_plus: i64, s_minus: i64, n: i64, m: i64) -> bool {
    if !is_odd_prime(p) || s_plus < 0 || s_minus < 0 || n < 0 || m < 0 {
        return false;
    }
    // (ii)
    if s_plus + s_minus != (n + 2 * m) * (p - 1) {
        return false;
    }
    // (iii)
    if s_plus % 2 != 0 {
        return false;
    }
    // (iv)
    if n == 0 && (s_plus - s_minus).rem_euclid(8) != 0 {
        return false;
    }
    true
}

/// Does a K3 surface with a non-symplectic automorphism of odd prime order
/// `p` exist, with invariant lattice p-elementary hyperbolic of rank `r`
/// and discriminant `p^a`?
pub fn k3_exists(p: i64, r: i64, a: i64) -> bool {
    if !is_odd_prime(p) || r < 1 || a < 0 {
        return false;
    }
    // (1)
    if p > 19 || (22 - r).rem_euclid(p - 1) != 0 {
        return false;
    }
    let q = (22 - r) / (p - 1);
    // (2)
    if a > r.min(q) || (a - q).rem_euclid(2) != 0 {
        return false;
    }
    // (3)
    if (a == 0 || a == r) && r.rem_euclid(8) != 2 {
        return false;
    }
    true
}

/// One collection of signatures `(k_i^+, k_i^-)`, `i = 1..(p-1)/2`, of an
/// order-p isometry: each entry has even nonnegative parts, the per-slot
/// totals agree, and the entries sum to the coinvariant signature.
pub type SignatureCollection = Vec<(u32, u32)>;

/// All signature collections for coinvariant signature `(s+, s-)`,
/// ordered lexicographically on the flattened tuple. Empty when the
/// constraints are unsatisfiable.
pub fn enumerate_signature_collections(
    p: i64,
    s_plus: u32,
    s_minus: u32,
) -> Vec<SignatureCollection> {
    if !is_odd_prime(p) || !s_plus.is_multiple_of(2) || !s_minus.is_multiple_of(2) {
        return Vec::new();
    }
    let slots = ((p - 1) / 2) as u32;
    let total = s_plus + s_minus;
    if !total.is_multiple_of(slots) {
        return Vec::new();
    }
    let per_slot = total / slots;
    if !per_slot.is_multiple_of(2) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut current: SignatureCollection = Vec::with_capacity(slots as usize);
    fill(slots, per_slot, s_plus, &mut current, &mut out);
    out
}

fn fill(
    slots_left: u32,
    per_slot: u32,
    plus_left: u32,
    current: &mut SignatureCollection,
    out: &mut Vec<SignatureCollection>,
) {
    if slots_left == 0 {
        if plus_left == 0 {
            out.push(current.clone());
        }
        return;
    }
    // Remaining slots can absorb at most (slots_left - 1) * per_slot more.
    let mut k_plus = 0;
    while k_plus <= per_slot.min(plus_left) {
        if plus_left - k_plus <= (slots_left - 1) * per_slot {
            current.push((k_plus, per_slot - k_plus));
            fill(slots_left - 1, per_slot, plus_left - k_plus, current, out);
            current.pop();
        }
        k_plus += 2;
    }
}

/// Number of signature collections (the factor multiplying the relative
/// class number in conjugacy counts).
pub fn signature_collection_count(p: i64, s_plus: u32, s_minus: u32) -> u64 {
    enumerate_signature_collections(p, s_plus, s_minus).len() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inv(parity: Parity, l: (i64, i64), p: i64, s: (i64, i64), n: i64) -> IsometryInvariants {
        IsometryInvariants {
            p,
            parity,
            l_plus: l.0,
            l_minus: l.1,
            s_plus: s.0,
            s_minus: s.1,
            n,
        }
    }

    #[test]
    fn isometry_examples() {
        assert!(isometry_exists(&inv(Parity::Even, (3, 19), 3, (2, 10), 4)));
        assert!(isometry_exists(&inv(Parity::Even, (4, 20), 23, (2, 20), 1)));
        assert!(!isometry_exists(&inv(Parity::Odd, (1, 1), 3, (2, 0), 1)));
        // p = 23 never fits in signature (3,19)
        for s_minus in (0..=19).step_by(2) {
            for n in 0..=22 {
                assert!(!isometry_exists(&inv(
                    Parity::Even,
                    (3, 19),
                    23,
                    (2, s_minus),
                    n
                )));
            }
        }
    }

    #[test]
    fn isometry_rejects_odd_signatures_and_overflow() {
        assert!(!isometry_exists(&inv(Parity::Even, (3, 19), 3, (1, 11), 4)));
        assert!(!isometry_exists(&inv(Parity::Even, (3, 19), 3, (4, 10), 4)));
        assert!(!isometry_exists(&inv(Parity::Even, (3, 19), 3, (2, 20), 1)));
        // m must be a nonnegative integer
        assert!(!isometry_exists(&inv(Parity::Even, (3, 19), 3, (2, 10), 5)));
        assert!(!isometry_exists(&inv(
            Parity::Even,
            (3, 19),
            3,
            (2, 10),
            13
        )));
    }

    #[test]
    fn fixed_point_free_examples() {
        assert!(fixed_point_free_exists(3, 2, 0, 1, 0));
        assert!(fixed_point_free_exists(3, 2, 2, 0, 1));
        assert!(!fixed_point_free_exists(3, 2, 10, 0, 2));
        assert!(!fixed_point_free_exists(5, 1, 3, 1, 0));
    }

    #[test]
    fn k3_examples() {
        assert!(!k3_exists(23, 2, 1));
        assert!(k3_exists(3, 10, 0));
        assert!(!k3_exists(3, 22, 0));
        assert!(k3_exists(3, 2, 2));
        assert!(!k3_exists(3, 2, 1));
        assert!(k3_exists(13, 10, 1));
        assert!(!k3_exists(2, 10, 0));
    }

    #[test]
    fn signature_collections_examples() {
        assert_eq!(
            enumerate_signature_collections(3, 2, 10),
            vec![vec![(2, 10)]]
        );
        assert_eq!(
            enumerate_signature_collections(5, 2, 2),
            vec![vec![(0, 2), (2, 0)], vec![(2, 0), (0, 2)]]
        );
        assert!(enumerate_signature_collections(5, 2, 1).is_empty());
        // all collections satisfy the defining constraints
        for c in enumerate_signature_collections(7, 4, 2) {
            assert_eq!(c.len(), 3);
            let (sp, sm): (u32, u32) = c.iter().fold((0, 0), |acc, &(a, b)| (acc.0 + a, acc.1 + b));
            assert_eq!((sp, sm), (4, 2));
            assert!(c
                .iter()
                .all(|&(a, b)| a % 2 == 0 && b % 2 == 0 && a + b == 2));
        }
        // p = 3 always has at most one collection
        for sp in (0..=8u32).step_by(2) {
            for sm in (0..=8u32).step_by(2) {
                assert!(enumerate_signature_collections(3, sp, sm).len() <= 1);
            }
        }
    }
}
