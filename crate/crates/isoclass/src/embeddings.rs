//! Primitive vectors and small sublattices of p-elementary lattices:
//! existence of a vector of given even square and divisibility, orbit
//! counts under the orthogonal group with the rank-4 spinor exception,
//! primitive embeddings of the rank-2 lattice of discriminant 3, and the
//! hyperbolic-plane direct-summand test.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::arith::{legendre, minus_one_power, valuation, Factorization};
use crate::discforms::{complement_disc_form, genus_exists, GenusSymbol, Parity};
use crate::{Error, Result};

/// A primitive-vector query: genus of the ambient lattice, the square
/// `x^2 = k` (even, positive) and the divisibility (1 or p).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmbeddingQuery {
    pub genus: GenusSymbol,
    pub k: u64,
    pub div: i64,
}

/// Existence verdict. `NecessaryOnly` is returned when the numerical
/// conditions pass but the signature lies outside the range where they are
/// known to be sufficient (`l+ = 1` or `l- = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Existence {
    Yes,
    No,
    NecessaryOnly,
}

/// Orbit count of primitive vectors with the query data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitCount {
    Zero,
    One,
    Two,
    Unknown,
}

impl OrbitCount {
    pub fn as_number(self) -> Option<u64> {
        match self {
            OrbitCount::Zero => Some(0),
            OrbitCount::One => Some(1),
            OrbitCount::Two => Some(2),
            OrbitCount::Unknown => None,
        }
    }
}

/// Existence plus orbit data for a primitive-vector query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub exists: Existence,
    pub orbit_count: OrbitCount,
    /// The rank-4 exception fired (two orbits instead of one).
    pub special_case: bool,
    pub l1_set: Vec<u64>,
    pub l0_set: Vec<u64>,
}

fn validate(q: &EmbeddingQuery) -> Result<()> {
    if q.k == 0 || !q.k.is_multiple_of(2) {
        return Err(Error::arg("the square k must be even and positive"));
    }
    if q.genus.parity != Parity::Even {
        return Err(Error::arg("vector queries are defined for even genera"));
    }
    if !q.genus.exists() {
        return Err(Error::arg(format!("empty genus {}", q.genus)));
    }
    if q.div != 1 && q.div != q.genus.p {
        return Err(Error::arg("divisibility must be 1 or p"));
    }
    Ok(())
}

/// Does the genus contain a lattice with a primitive vector of square `k`
/// and the given divisibility?
///
/// With divisibility 1 the conditions are, writing `a = v_p(k)`,
/// `k = k' p^a` and `rk` for the rank:
/// `a = 0, n < rk - 1`; or `a = 0, n = rk - 1` and
/// `(-1/p)^(l-) (k'/p) = eps`; or `a > 0, n < rk - 2`; or
/// `a > 0, n = rk - 2` and `l+ = l- (mod 8)`.
/// With divisibility p: `a = 1, n > 1`; or `a = 1, n = 1, (k'/p) = eps`;
/// or `a > 1, n > 2`; or `a > 1, n = 2, l+ = l- (mod 8)`.
pub fn vector_exists(q: &EmbeddingQuery) -> Result<Existence> {
    validate(q)?;
    let g = q.genus;
    let p = g.p;
    let rank = i64::from(g.rank());
    let n = i64::from(g.n);
    let a = valuation(q.k as i64, p)?;
    let k_prime = (q.k / (p as u64).pow(a)) as i64;
    let mod8 = (i64::from(g.l_plus) - i64::from(g.l_minus)).rem_euclid(8) == 0;

    let conditions = if q.div == 1 {
        if a == 0 {
            n < rank - 1
                || (n == rank - 1
                    && minus_one_power(p, g.l_minus)? * legendre(k_prime, p)? == g.eps)
        } else {
            n < rank - 2 || (n == rank - 2 && mod8)
        }
    } else {
        match a {
            0 => false,
            1 => n > 1 || (n == 1 && legendre(k_prime, p)? == g.eps),
            _ => n > 2 || (n == 2 && mod8),
        }
    };

    if !conditions {
        return Ok(Existence::No);
    }
    if g.l_plus >= 2 && g.l_minus >= 1 {
        Ok(Existence::Yes)
    } else {
        Ok(Existence::NecessaryOnly)
    }
}

/// Prime sets controlling the spinor computation: for `j = |q|`,
/// `L1` holds the odd primes `l != p` with odd valuation in `j` together
/// with 2 when `v_2(j)` is even and positive; `L0` swaps the parities.
fn spinor_prime_sets(j: u64, p: i64) -> Result<(Vec<u64>, Vec<u64>)> {
    let mut l1 = BTreeSet::new();
    let mut l0 = BTreeSet::new();
    if j > 1 {
        for &(l, e) in Factorization::of(j)?.pairs() {
            if l == p as u64 {
                continue;
            }
            let odd_valuation = e % 2 == 1;
            if l == 2 {
                if odd_valuation {
                    l0.insert(2);
                } else {
                    l1.insert(2);
                }
            } else if odd_valuation {
                l1.insert(l);
            } else {
                l0.insert(l);
            }
        }
    }
    Ok((l1.into_iter().collect(), l0.into_iter().collect()))
}

/// Orbit count of primitive vectors of square `k` and the given
/// divisibility under `O(L)`.
///
/// Outside `l+ >= 2, l- >= 1, rank >= 4` the count is `Unknown` (the
/// definite and rank-3 cases are not covered; callers fall back to the
/// enumeration oracle for definite lattices). Within range the count is 1
/// whenever the vector exists, except that it is 2 when all of the
/// following hold: `rk L = 4`, `v_p(k) >= 2`, `|det L| / div^2 = p`,
/// `(-2k'/p) = 1`, and `p = 1 (mod 4)` or some `l` in `L1` is a nonsquare
/// mod p.
pub fn vector_orbits(q: &EmbeddingQuery) -> Result<OrbitReport> {
    let exists = vector_exists(q)?;
    let g = q.genus;
    let p = g.p;

    // j = |q| from the complement decomposition; None only when the vector
    // cannot exist at this divisibility.
    let decomposition = complement_disc_form(q.k, p, g.n, g.eps, q.div)?;
    let (l1_set, l0_set) = match &decomposition {
        Some(d) => spinor_prime_sets(d.j(), p)?,
        None => (Vec::new(), Vec::new()),
    };

    let in_range = g.l_plus >= 2 && g.l_minus >= 1 && g.rank() >= 4;
    if !in_range {
        return Ok(OrbitReport {
            exists,
            orbit_count: if exists == Existence::No {
                OrbitCount::Zero
            } else {
                OrbitCount::Unknown
            },
            special_case: false,
            l1_set,
            l0_set,
        });
    }
    if exists != Existence::Yes {
        return Ok(OrbitReport {
            exists,
            orbit_count: OrbitCount::Zero,
            special_case: false,
            l1_set,
            l0_set,
        });
    }

    let a = valuation(q.k as i64, p)?;
    let k_prime = (q.k / (p as u64).pow(a)) as i64;
    let det_over_div2 = g.abs_det() / (q.div * q.div);
    let mut special =
        g.rank() == 4 && a >= 2 && det_over_div2 == p && legendre(-2 * k_prime, p)? == 1;
    if special {
        let parity_ok = if p % 4 == 1 {
            true
        } else {
            let mut found = false;
            for &l in &l1_set {
                if legendre(l as i64, p)? == -1 {
                    found = true;
                    break;
                }
            }
            found
        };
        special = parity_ok;
    }

    Ok(OrbitReport {
        exists,
        orbit_count: if special {
            OrbitCount::Two
        } else {
            OrbitCount::One
        },
        special_case: special,
        l1_set,
        l0_set,
    })
}

/// Does the rank-2 even negative definite lattice of discriminant 3 embed
/// primitively into a lattice of genus `II_(3,l-)p^(eps n)` with the given
/// divisibility (1 or 3)?
///
/// The embedding, when it exists, is unique up to the orthogonal group of
/// the target and is determined by its divisibility. For `l- = 1` the
/// stated conditions are applied as exact although the rank-2 complement
/// cases lie outside the general argument.
pub fn a2_embeds(l_minus: u32, p: i64, eps: i64, n: u32, div: i64) -> Result<bool> {
    if l_minus == 0 || l_minus.is_multiple_of(2) {
        return Err(Error::arg("the target genus needs positive odd l-"));
    }
    if div != 1 && div != 3 {
        return Err(Error::arg(
            "divisibility of the rank-2 sublattice is 1 or 3",
        ));
    }
    let g = GenusSymbol::even(3, l_minus, p, eps, n)?;
    let rank = i64::from(g.rank());
    let n = i64::from(n);
    Ok(if div == 1 {
        if p != 3 {
            rank - n > 2 || (rank - n == 2 && eps == legendre(-3, p)?)
        } else {
            rank - n > 3 || (rank - n == 3 && eps == -1)
        }
    } else {
        p == 3
            && ((n == 1 && eps == -1)
                || (n > 1 && rank - n > 1)
                || (n > 1 && rank - n == 1 && eps == 1))
    })
}

/// Does the (unique-in-genus) lattice of the given even genus split off a
/// hyperbolic plane?
///
/// Decided by signature reduction: both signature entries positive, the
/// residual genus `II_(l+-1, l--1)p^(eps n)` nonempty, and `n <= rank - 2`.
pub fn contains_u(g: &GenusSymbol) -> Result<bool> {
    if g.parity != Parity::Even {
        return Err(Error::arg(
            "the hyperbolic-plane test applies to even genera",
        ));
    }
    if !g.exists() {
        return Err(Error::arg(format!("empty genus {}", g)));
    }
    if g.l_plus < 1 || g.l_minus < 1 || g.n > g.rank() - 2 {
        return Ok(false);
    }
    Ok(genus_exists(
        Parity::Even,
        g.l_plus - 1,
        g.l_minus - 1,
        g.p,
        g.eps,
        g.n,
    ))
}
