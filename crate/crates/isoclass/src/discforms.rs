//! p-elementary genus symbols and torsion quadratic forms.
//!
//! A genus symbol `II_(l+,l-)p^(eps n)` (or `I_...` for odd lattices)
//! records parity, signature, one odd prime `p`, a sign `eps` and the
//! length `n` of the discriminant group `(Z/p)^n`. Existence of a lattice
//! with a given symbol is decided by a mod-8 congruence on the signature
//! (rank > n) or a Legendre condition (rank = n).
//!
//! Torsion forms over odd primes are classified at each scale by their
//! length and determinant character, which is how they are stored here.
//! The complement decomposition realizes the discriminant form of the
//! orthogonal complement of a primitive vector of square `k` and
//! divisibility `1` or `p` as `-q (+) r`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::arith::{is_odd_prime, legendre, minus_one_power, valuation, Factorization};
use crate::{Error, Result};

/// Lattice parity: even (`II`) or odd (`I`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Parity {
    Even,
    Odd,
}

/// Which eps values make a genus nonempty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForcedEps {
    Plus,
    Minus,
    None,
    Both,
}

impl ForcedEps {
    pub fn as_signs(self) -> &'static [i64] {
        match self {
            ForcedEps::Plus => &[1],
            ForcedEps::Minus => &[-1],
            ForcedEps::None => &[],
            ForcedEps::Both => &[1, -1],
        }
    }
}

/// A p-elementary genus symbol `II/I_(l+,l-)p^(eps n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenusSymbol {
    pub parity: Parity,
    pub l_plus: u32,
    pub l_minus: u32,
    pub p: i64,
    pub eps: i64,
    pub n: u32,
}

impl GenusSymbol {
    /// Build a symbol, enforcing the structural invariants:
    /// `p` an odd prime, `eps` a sign, `n <= rank`, and `eps = +1` when
    /// `n = 0` (empty product convention).
    pub fn new(
        parity: Parity,
        l_plus: u32,
        l_minus: u32,
        p: i64,
        eps: i64,
        n: u32,
    ) -> Result<Self> {
        if !is_odd_prime(p) {
            return Err(Error::arg(format!("{p} is not an odd prime")));
        }
        if eps != 1 && eps != -1 {
            return Err(Error::arg("eps must be +1 or -1"));
        }
        if n > l_plus + l_minus {
            return Err(Error::arg(format!(
                "discriminant length {n} exceeds rank {}",
                l_plus + l_minus
            )));
        }
        if n == 0 && eps != 1 {
            return Err(Error::arg("n = 0 forces eps = +1"));
        }
        Ok(GenusSymbol {
            parity,
            l_plus,
            l_minus,
            p,
            eps,
            n,
        })
    }

    pub fn even(l_plus: u32, l_minus: u32, p: i64, eps: i64, n: u32) -> Result<Self> {
        Self::new(Parity::Even, l_plus, l_minus, p, eps, n)
    }

    pub fn rank(&self) -> u32 {
        self.l_plus + self.l_minus
    }

    /// Absolute determinant `p^n` of a lattice in this genus.
    pub fn abs_det(&self) -> i64 {
        self.p.pow(self.n)
    }

    /// Is the genus nonempty?
    pub fn exists(&self) -> bool {
        genus_exists(
            self.parity,
            self.l_plus,
            self.l_minus,
            self.p,
            self.eps,
            self.n,
        )
    }

    /// Discriminant form of a lattice in this genus: `n` generators
    /// `w_{p,1}` at scale 1 with total character `eps`.
    pub fn discriminant_form(&self) -> TorsionForm {
        let mut t = TorsionForm::zero();
        if self.n > 0 {
            t.push_scaled(self.p as u64, 1, self.n, self.eps);
        }
        t
    }
}

impl fmt::Display for GenusSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head = match self.parity {
            Parity::Even => "II",
            Parity::Odd => "I",
        };
        let sign = if self.eps >= 0 { '+' } else { '-' };
        write!(
            f,
            "{}_({},{}){}^{}{}",
            head, self.l_plus, self.l_minus, self.p, sign, self.n
        )
    }
}

impl FromStr for GenusSymbol {
    type Err = Error;

    /// Parse the whitespace-free grammar `II_(l+,l-)p^eN` / `I_(l+,l-)p^eN`
    /// with `e` one of `+`, `-`. Anything else is rejected.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::arg(format!("malformed genus symbol: {s:?}"));
        let (parity, rest) = if let Some(r) = s.strip_prefix("II_(") {
            (Parity::Even, r)
        } else if let Some(r) = s.strip_prefix("I_(") {
            (Parity::Odd, r)
        } else {
            return Err(bad());
        };
        let (lp, rest) = take_uint(rest).ok_or_else(bad)?;
        let rest = rest.strip_prefix(',').ok_or_else(bad)?;
        let (lm, rest) = take_uint(rest).ok_or_else(bad)?;
        let rest = rest.strip_prefix(')').ok_or_else(bad)?;
        let (p, rest) = take_uint(rest).ok_or_else(bad)?;
        let rest = rest.strip_prefix('^').ok_or_else(bad)?;
        let (eps, rest) = match rest.as_bytes().first() {
            Some(b'+') => (1i64, &rest[1..]),
            Some(b'-') => (-1i64, &rest[1..]),
            _ => return Err(bad()),
        };
        let (n, rest) = take_uint(rest).ok_or_else(bad)?;
        if !rest.is_empty() {
            return Err(bad());
        }
        GenusSymbol::new(parity, lp, lm, p as i64, eps, n)
    }
}

fn take_uint(s: &str) -> Option<(u32, &str)> {
    let end = s.bytes().take_while(|b| b.is_ascii_digit()).count();
    if end == 0 || (end > 1 && s.starts_with('0')) {
        return None;
    }
    let v = s[..end].parse().ok()?;
    Some((v, &s[end..]))
}

/// Is the genus `parity_(l+,l-)p^(eps n)` nonempty?
///
/// Even case with `n < rank`: `l+ - l- = 2 eps - 2 - (p-1) n (mod 8)`.
/// Rank `= n` (either parity): `eps = (-1/p)^(l-)`. The odd case is
/// otherwise unconstrained; `n = 0` keeps the `eps = +1` convention, which
/// for even lattices reduces to `l+ = l- (mod 8)`.
pub fn genus_exists(parity: Parity, l_plus: u32, l_minus: u32, p: i64, eps: i64, n: u32) -> bool {
    if !is_odd_prime(p) || (eps != 1 && eps != -1) {
        return false;
    }
    let rank = l_plus + l_minus;
    if n > rank {
        return false;
    }
    if n == 0 && eps != 1 {
        return false;
    }
    match parity {
        Parity::Even => {
            if rank == 0 {
                return n == 0;
            }
            if n < rank {
                let lhs = (i64::from(l_plus) - i64::from(l_minus)).rem_euclid(8);
                let rhs = (2 * eps - 2 - (p - 1) * i64::from(n)).rem_euclid(8);
                lhs == rhs
            } else {
                eps == minus_one_power(p, l_minus).expect("p odd prime")
            }
        }
        Parity::Odd => {
            if rank == 0 {
                return false;
            }
            if n == rank {
                eps == minus_one_power(p, l_minus).expect("p odd prime")
            } else {
                true
            }
        }
    }
}

/// The eps value(s) for which `genus_exists` holds at the given data.
pub fn forced_eps(parity: Parity, l_plus: u32, l_minus: u32, p: i64, n: u32) -> ForcedEps {
    let plus = genus_exists(parity, l_plus, l_minus, p, 1, n);
    let minus = genus_exists(parity, l_plus, l_minus, p, -1, n);
    match (plus, minus) {
        (true, true) => ForcedEps::Both,
        (true, false) => ForcedEps::Plus,
        (false, true) => ForcedEps::Minus,
        (false, false) => ForcedEps::None,
    }
}

/// A generator of a finite quadratic form: `u_{p,k}` (rank-2 hyperbolic
/// block mod p^k) or `w_{p,k}^eps` (rank-1 block).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TorsionGen {
    U { p: u64, scale: u32 },
    W { p: u64, scale: u32, eps: i64 },
}

/// A torsion quadratic form presented as a multiset of generators.
///
/// At each odd prime and scale only the total length and the product of the
/// characters matter (`w^e (+) w^e = w^-e (+) w^-e` after renormalization),
/// so that is the canonical representation stored here. Scales at the prime
/// 2 keep length and a character slot but are never isomorphism-tested
/// beyond construction equality; the operations of this crate only consume
/// their order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TorsionForm {
    // (prime, scale) -> (length, character product)
    blocks: BTreeMap<(u64, u32), (u32, i64)>,
}

impl TorsionForm {
    pub fn zero() -> Self {
        TorsionForm::default()
    }

    /// Append `len` generators `w_{p,scale}` of total character `eps`.
    pub fn push_scaled(&mut self, p: u64, scale: u32, len: u32, eps: i64) {
        if len == 0 {
            return;
        }
        let e = self.blocks.entry((p, scale)).or_insert((0, 1));
        e.0 += len;
        e.1 *= eps;
    }

    /// Append `u_{p,scale}`: length 2, character `(-1/p)`.
    pub fn push_u(&mut self, p: u64, scale: u32) -> Result<()> {
        let chi = legendre(-1, p as i64)?;
        self.push_scaled(p, scale, 2, chi);
        Ok(())
    }

    /// Discriminant form of the rank-1 lattice `<k>`, `k > 0`:
    /// one generator `w_{l,e}^(chi_l(k/l^e))` for each prime power `l^e || k`.
    pub fn of_rank1(k: u64) -> Result<Self> {
        let mut t = TorsionForm::zero();
        let f = Factorization::of(k)?;
        for &(l, e) in f.pairs() {
            let unit = (k / l.pow(e)) as i64;
            let chi = if l == 2 {
                // 2-adic characters are not classified here; record the
                // odd part mod 8 so equal constructions compare equal.
                unit.rem_euclid(8)
            } else {
                legendre(unit, l as i64)?
            };
            t.push_scaled(l, e, 1, chi);
        }
        Ok(t)
    }

    /// Total order of the underlying group.
    pub fn order(&self) -> u64 {
        self.blocks
            .iter()
            .map(|(&(p, scale), &(len, _))| p.pow(scale * len))
            .product()
    }

    /// Length (minimal generator count) of the p-part at the given scale.
    pub fn len_at(&self, p: u64, scale: u32) -> u32 {
        self.blocks.get(&(p, scale)).map_or(0, |&(len, _)| len)
    }

    /// Character product of the p-part at the given scale.
    pub fn eps_at(&self, p: u64, scale: u32) -> i64 {
        self.blocks.get(&(p, scale)).map_or(1, |&(_, eps)| eps)
    }

    /// Remove `len` generators of total character `eps` at `(p, scale)`.
    /// Fails if not enough length is present or the character cannot be
    /// realized (a full-length strip must match the character exactly;
    /// a partial strip can always be completed).
    fn strip(&mut self, p: u64, scale: u32, len: u32, eps: i64) -> bool {
        match self.blocks.get_mut(&(p, scale)) {
            None => false,
            Some(block) => {
                if block.0 < len {
                    return false;
                }
                if block.0 == len {
                    if block.1 != eps {
                        return false;
                    }
                    self.blocks.remove(&(p, scale));
                } else {
                    block.0 -= len;
                    block.1 *= eps;
                }
                true
            }
        }
    }
}

/// Which case of the complement decomposition applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComplementCase {
    /// divisibility 1
    Div1,
    /// divisibility p, valuation of k at p equal to 1
    DivpA1,
    /// divisibility p, valuation of k at p at least 2
    DivpA2Plus,
}

/// The discriminant form of the orthogonal complement of a primitive vector
/// of square `k`, written as `-q (+) r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplementDecomposition {
    pub q: TorsionForm,
    pub r: TorsionForm,
    pub case_tag: ComplementCase,
}

impl ComplementDecomposition {
    /// `|q| = j' p^b`; returns `(j, b)`.
    pub fn j(&self) -> u64 {
        self.q.order()
    }
}

/// Decompose the complement discriminant form for a primitive vector of
/// even square `k > 0` and divisibility `div` in a lattice of genus
/// `II_(l+,l-)p^(eps n)`.
///
/// - `div = 1`: `q = q_<k>`, `r = q_L`;
/// - `div = p`, `v_p(k) = 1`: one `w_{p,1}^(chi_p(k/p))` is stripped from
///   both `q_<k>` and `q_L`;
/// - `div = p`, `v_p(k) >= 2`: `u_{p,1}` is stripped from `q_L`.
///
/// Returns `None` when the required stripping is impossible (then no such
/// vector exists).
pub fn complement_disc_form(
    k: u64,
    p: i64,
    n: u32,
    eps: i64,
    div: i64,
) -> Result<Option<ComplementDecomposition>> {
    if k == 0 || !k.is_multiple_of(2) {
        return Err(Error::arg("k must be even and positive"));
    }
    if !is_odd_prime(p) {
        return Err(Error::arg(format!("{p} is not an odd prime")));
    }
    if div != 1 && div != p {
        return Err(Error::arg("divisibility must be 1 or p"));
    }
    let q_k = TorsionForm::of_rank1(k)?;
    let mut q_l = TorsionForm::zero();
    if n > 0 {
        q_l.push_scaled(p as u64, 1, n, eps);
    }

    if div == 1 {
        return Ok(Some(ComplementDecomposition {
            q: q_k,
            r: q_l,
            case_tag: ComplementCase::Div1,
        }));
    }

    let a = valuation(k as i64, p)?;
    match a {
        0 => Ok(None),
        1 => {
            let delta = legendre((k / p as u64) as i64, p)?;
            let mut q = q_k;
            let mut r = q_l;
            if !q.strip(p as u64, 1, 1, delta) || !r.strip(p as u64, 1, 1, delta) {
                return Ok(None);
            }
            Ok(Some(ComplementDecomposition {
                q,
                r,
                case_tag: ComplementCase::DivpA1,
            }))
        }
        _ => {
            let mut r = q_l;
            let chi = legendre(-1, p)?;
            if !r.strip(p as u64, 1, 2, chi) {
                return Ok(None);
            }
            Ok(Some(ComplementDecomposition {
                q: q_k,
                r,
                case_tag: ComplementCase::DivpA2Plus,
            }))
        }
    }
}
