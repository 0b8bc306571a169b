//! Exact q-series arithmetic and the definite rank-2 orbit counts.
//!
//! Series exponents are stored in units of 1/24 of the natural exponent:
//! the single common denominator that accommodates both theta2 (quarter
//! exponents) and eta (1/24 exponents). Coefficients are integers;
//! precision is an exclusive exponent bound, below which every absent
//! coefficient is an exact zero.
//!
//! The four definite invariant lattices of rank 2 have theta series
//! `theta3(z) theta3(ez) + theta2(z) theta2(ez)` for e = 3, 7, 23, with a
//! correction `-2 eta(z) eta(23z)` for the second lattice of discriminant
//! 23. Orbit counts of primitive vectors are always computed by the
//! enumeration oracle and cross-checked against `r(k)/|G|` off the
//! exceptional set.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::arith::moebius;
use crate::latgeom::{
    self, fixed_norm_set, gram_a2, gram_f23a, gram_f23b, gram_k7, isometries, orbit_decomposition,
    GramLattice, IsomGroup,
};
use crate::{Error, Result};

/// Exact truncated q-series with exponents in 1/24 units.
///
/// Absent exponents below `precision` are zero; exponents at or above
/// `precision` are unknown.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries {
    coefficients: BTreeMap<u64, i64>,
    precision: u64,
}

impl QSeries {
    pub fn zero(precision: u64) -> Self {
        QSeries {
            coefficients: BTreeMap::new(),
            precision,
        }
    }

    pub fn precision(&self) -> u64 {
        self.precision
    }

    /// Coefficient at an exponent in 1/24 units (must be below precision).
    pub fn coeff(&self, exp24: u64) -> i64 {
        debug_assert!(exp24 < self.precision, "coefficient beyond precision");
        self.coefficients.get(&exp24).copied().unwrap_or(0)
    }

    pub fn set(&mut self, exp24: u64, value: i64) {
        if exp24 >= self.precision {
            return;
        }
        if value == 0 {
            self.coefficients.remove(&exp24);
        } else {
            self.coefficients.insert(exp24, value);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.coefficients.iter().map(|(&e, &c)| (e, c))
    }

    fn min_exp(&self) -> u64 {
        self.coefficients
            .keys()
            .next()
            .copied()
            .unwrap_or(self.precision)
    }

    /// Substitute q -> q^e. Exponents and precision scale by e; the result
    /// is still exact below the scaled precision.
    pub fn rescale(&self, e: u64) -> QSeries {
        assert!(e >= 1, "rescale factor must be positive");
        let mut out = QSeries::zero(self.precision.saturating_mul(e));
        for (exp, c) in self.terms() {
            out.set(exp * e, c);
        }
        out
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let prec = self.precision.min(other.precision);
        let mut out = QSeries::zero(prec);
        for (e, c) in self.terms().chain(other.terms()) {
            if e < prec {
                out.set(e, out.coeff(e) + c);
            }
        }
        out
    }

    pub fn scalar_mul(&self, s: i64) -> QSeries {
        let mut out = QSeries::zero(self.precision);
        for (e, c) in self.terms() {
            out.set(e, c * s);
        }
        out
    }

    /// Convolution product. The result is exact below
    /// `min(self.prec + other.min_exp, other.prec + self.min_exp)`.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let prec = (self.precision + other.min_exp()).min(other.precision + self.min_exp());
        let mut out = QSeries::zero(prec);
        for (ea, ca) in self.terms() {
            for (eb, cb) in other.terms() {
                let e = ea + eb;
                if e < prec {
                    out.set(e, out.coeff(e) + ca * cb);
                }
            }
        }
        out
    }
}

/// `theta2 = sum_m q^((m + 1/2)^2)`: coefficient 2 at exponent
/// `6 (2m+1)^2` in 1/24 units.
pub fn theta2(prec24: u64) -> QSeries {
    let mut s = QSeries::zero(prec24);
    let mut m = 0u64;
    loop {
        let e = 6 * (2 * m + 1) * (2 * m + 1);
        if e >= prec24 {
            break;
        }
        s.set(e, 2);
        m += 1;
    }
    s
}

/// `theta3 = sum_m q^(m^2)`: coefficient 1 at 0 and 2 at `24 m^2`.
pub fn theta3(prec24: u64) -> QSeries {
    let mut s = QSeries::zero(prec24);
    s.set(0, 1);
    let mut m = 1u64;
    loop {
        let e = 24 * m * m;
        if e >= prec24 {
            break;
        }
        s.set(e, 2);
        m += 1;
    }
    s
}

/// Dedekind eta: `q^(1/24) prod (1 - q^n)`, expanded by the pentagonal
/// number theorem. Exponents are `1 + 24 j(3j-1)/2` in 1/24 units.
pub fn eta(prec24: u64) -> QSeries {
    let mut s = QSeries::zero(prec24);
    let mut j: i64 = 0;
    loop {
        let mut hit = false;
        for jj in [j, -j] {
            let pent = jj * (3 * jj - 1) / 2;
            let e = 1 + 24 * pent as u64;
            if e < prec24 {
                s.set(e, if jj.rem_euclid(2) == 0 { 1 } else { -1 });
                hit = true;
            }
            if jj == 0 {
                break;
            }
        }
        if !hit && j > 0 {
            break;
        }
        j += 1;
    }
    s
}

/// The four positive definite rank-2 invariant lattices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DefiniteLatticeId {
    A2neg,
    K7,
    F23a,
    F23b,
}

impl DefiniteLatticeId {
    pub fn gram(self) -> GramLattice {
        match self {
            DefiniteLatticeId::A2neg => gram_a2(),
            DefiniteLatticeId::K7 => gram_k7(),
            DefiniteLatticeId::F23a => gram_f23a(),
            DefiniteLatticeId::F23b => gram_f23b(),
        }
    }

    /// The rescale factor e of the theta identity.
    fn scale(self) -> u64 {
        match self {
            DefiniteLatticeId::A2neg => 3,
            DefiniteLatticeId::K7 => 7,
            DefiniteLatticeId::F23a | DefiniteLatticeId::F23b => 23,
        }
    }

    pub const ALL: [DefiniteLatticeId; 4] = [
        DefiniteLatticeId::A2neg,
        DefiniteLatticeId::K7,
        DefiniteLatticeId::F23a,
        DefiniteLatticeId::F23b,
    ];
}

impl std::str::FromStr for DefiniteLatticeId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A2" | "A2neg" => Ok(DefiniteLatticeId::A2neg),
            "K7" => Ok(DefiniteLatticeId::K7),
            "F23a" => Ok(DefiniteLatticeId::F23a),
            "F23b" => Ok(DefiniteLatticeId::F23b),
            _ => Err(Error::arg(format!(
                "unknown lattice {s:?}, expected A2neg, K7, F23a or F23b"
            ))),
        }
    }
}

/// Theta series coefficients `a(k) = #{x : x^2 = 2k}` for `k < prec`
/// (whole-q units), via the classical identities.
pub fn theta_series(id: DefiniteLatticeId, prec: u64) -> Result<Vec<i64>> {
    if prec == 0 {
        return Err(Error::arg("precision must be at least 1"));
    }
    let e = id.scale();
    let target = 24 * prec;
    // Source precisions chosen so each product is exact below `target`.
    let t3 = theta3(target).mul(&theta3(target.div_ceil(e)).rescale(e));
    let t2 = theta2(target).mul(&theta2(target.div_ceil(e)).rescale(e));
    let mut series = t3.add(&t2);
    if id == DefiniteLatticeId::F23b {
        let eta_part = eta(target).mul(&eta(target.div_ceil(23)).rescale(23));
        series = series.add(&eta_part.scalar_mul(-2));
    }
    debug_assert!(series.precision() >= target);
    let mut out = vec![0i64; prec as usize];
    for (exp, c) in series.terms() {
        if exp >= target {
            continue;
        }
        assert_eq!(exp % 24, 0, "theta series must have integral exponents");
        out[(exp / 24) as usize] = c;
    }
    Ok(out)
}

/// Möbius inversion of a theta coefficient sequence:
/// `r(n) = sum_{d^2 | n} mu(d) a(n / d^2)`, with `r(0) = 0`.
pub fn primitive_counts(a: &[i64]) -> Vec<i64> {
    let mut r = vec![0i64; a.len()];
    for n in 1..a.len() {
        let mut acc = 0i64;
        let mut d = 1usize;
        while d * d <= n {
            if n % (d * d) == 0 {
                acc += moebius(d as u64).expect("d >= 1") * a[n / (d * d)];
            }
            d += 1;
        }
        r[n] = acc;
    }
    r
}

/// Orbit counts `b(k)` of primitive vectors of norm `2k` under the given
/// group, for `k = 1..=kmax`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitSeries {
    pub lattice: DefiniteLatticeId,
    pub group: IsomGroup,
    /// counts[k - 1] = b(k)
    pub counts: Vec<u64>,
}

/// Compute `b(k)` for `k = 1..=kmax` by exact orbit decomposition, then
/// cross-check `b(k) |G| = r(k)` off the exceptional set `S_G`.
pub fn orbit_series(id: DefiniteLatticeId, group: IsomGroup, kmax: u64) -> Result<OrbitSeries> {
    if kmax == 0 {
        return Err(Error::arg("kmax must be at least 1"));
    }
    let lattice = id.gram();
    let matrices = isometries(&lattice, group)?;
    let order = matrices.len() as u64;
    let exceptional = fixed_norm_set(&lattice, &matrices, kmax as i64)?;
    let mut counts = Vec::with_capacity(kmax as usize);
    for k in 1..=kmax as i64 {
        let orbits = orbit_decomposition(&lattice, &matrices, 2 * k, true)?;
        let b = orbits.len() as u64;
        if !exceptional.contains(&k) {
            let r: u64 = orbits.iter().map(|o| o.size).sum();
            assert_eq!(b * order, r, "free action violated off S_G at k = {k}");
        }
        counts.push(b);
    }
    Ok(OrbitSeries {
        lattice: id,
        group,
        counts,
    })
}

/// Direct vector count from the oracle: `#{x : x^2 = 2k}`.
pub fn brute_force_counts(id: DefiniteLatticeId, prec: u64) -> Result<Vec<i64>> {
    let lattice = id.gram();
    let mut out = Vec::with_capacity(prec as usize);
    out.push(1); // the zero vector
    for k in 1..prec as i64 {
        out.push(latgeom::enumerate_vectors(&lattice, 2 * k)?.len() as i64);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_building_blocks() {
        let t3 = theta3(240);
        assert_eq!(t3.coeff(0), 1);
        assert_eq!(t3.coeff(24), 2);
        assert_eq!(t3.coeff(48), 0);
        assert_eq!(t3.coeff(96), 2);

        let t2 = theta2(240);
        assert_eq!(t2.coeff(6), 2);
        assert_eq!(t2.coeff(54), 2);
        assert_eq!(t2.coeff(24), 0);

        let h = eta(240);
        assert_eq!(h.coeff(1), 1);
        assert_eq!(h.coeff(25), -1);
        assert_eq!(h.coeff(49), -1);
        assert_eq!(h.coeff(121), 1); // pentagonal number 5
        assert_eq!(h.coeff(169), 1); // pentagonal number 7
        assert_eq!(h.coeff(73), 0); // 3 is not pentagonal
    }

    #[test]
    fn rescale_examples() {
        let t3 = theta3(240);
        assert_eq!(t3.rescale(3).coeff(72), 2);
        assert_eq!(t3.rescale(1), t3);
        let h = eta(48);
        let r = h.rescale(23);
        assert_eq!(r.coeff(23), 1);
    }

    #[test]
    fn eta_squared_has_integer_exponent_grid() {
        // eta(z) eta(23z) = q - q^2 - q^3 + ... lives on whole exponents.
        let prod = eta(24 * 40).mul(&eta(48).rescale(23));
        for (e, _) in prod.terms() {
            assert_eq!(e % 24, 0);
        }
        assert_eq!(prod.coeff(24), 1);
        assert_eq!(prod.coeff(48), -1);
        assert_eq!(prod.coeff(72), -1);
    }

    #[test]
    fn theta_series_leading_coefficients() {
        let a = theta_series(DefiniteLatticeId::A2neg, 8).unwrap();
        assert_eq!(a[0], 1);
        assert_eq!(a[1], 6);
        let f = theta_series(DefiniteLatticeId::F23b, 8).unwrap();
        assert_eq!(f[0], 1);
        assert_eq!(f[1], 0);
        assert_eq!(f[2], 2);
        let k = theta_series(DefiniteLatticeId::K7, 8).unwrap();
        assert_eq!(k[0], 1);
        assert_eq!(k[1], 2);
    }

    #[test]
    fn theta_equals_brute_force_smoke() {
        for id in DefiniteLatticeId::ALL {
            let a = theta_series(id, 40).unwrap();
            let b = brute_force_counts(id, 40).unwrap();
            assert_eq!(a, b, "{id:?}");
        }
    }

    #[test]
    fn primitive_count_identities() {
        let a = theta_series(DefiniteLatticeId::A2neg, 60).unwrap();
        let r = primitive_counts(&a);
        assert_eq!(r[1], a[1]);
        assert_eq!(r[4], a[4] - a[1]);
        assert_eq!(r[4], 0);
        // forward check: a(k) = sum_{d^2 | k} r(k / d^2)
        for k in 1..60usize {
            let mut acc = 0;
            let mut d = 1;
            while d * d <= k {
                if k % (d * d) == 0 {
                    acc += r[k / (d * d)];
                }
                d += 1;
            }
            assert_eq!(acc, a[k], "k = {k}");
        }
        // r(k) = a(k) for squarefree k
        for k in [1usize, 2, 3, 5, 6, 7, 10, 13, 21, 30] {
            assert_eq!(r[k], a[k]);
        }
    }

    #[test]
    fn discriminant_23_series_differ_by_the_cusp_form() {
        let prec = 60u64;
        let a = theta_series(DefiniteLatticeId::F23a, prec).unwrap();
        let b = theta_series(DefiniteLatticeId::F23b, prec).unwrap();
        let cusp = eta(24 * prec).mul(&eta((24 * prec).div_ceil(23)).rescale(23));
        assert_eq!(a[0], 1);
        assert_eq!(b[0], 1);
        for k in 0..prec {
            assert!(a[k as usize] >= 0 && b[k as usize] >= 0);
            assert_eq!(
                a[k as usize] - b[k as usize],
                2 * cusp.coeff(24 * k),
                "k = {k}"
            );
        }
        // the difference is a cusp expansion with leading term q^1
        assert_eq!(a[1] - b[1], 2);
    }

    proptest::proptest! {
        #[test]
        fn primitive_counts_invert_exactly(mut a in proptest::collection::vec(0i64..1000, 2..120)) {
            a[0] = 1;
            let r = primitive_counts(&a);
            for k in 1..a.len() {
                let mut acc = 0;
                let mut d = 1;
                while d * d <= k {
                    if k % (d * d) == 0 {
                        acc += r[k / (d * d)];
                    }
                    d += 1;
                }
                proptest::prop_assert_eq!(acc, a[k]);
            }
        }
    }

    #[test]
    fn orbit_series_first_terms() {
        let s = orbit_series(DefiniteLatticeId::A2neg, IsomGroup::O, 21).unwrap();
        let expected: Vec<u64> = (1..=21)
            .map(|k| u64::from([1, 3, 7, 13, 19, 21].contains(&k)))
            .collect();
        assert_eq!(s.counts, expected);

        let s = orbit_series(DefiniteLatticeId::A2neg, IsomGroup::SO, 7).unwrap();
        assert_eq!(s.counts[6], 2);
        let s = orbit_series(DefiniteLatticeId::K7, IsomGroup::SO, 2).unwrap();
        assert_eq!(s.counts[1], 2);
        let s = orbit_series(DefiniteLatticeId::F23b, IsomGroup::O, 24).unwrap();
        assert_eq!(s.counts[23], 2);
    }
}
