//! Brute-force lattice oracle: explicit Gram matrices, exact short-vector
//! enumeration, finite isometry groups in rank <= 2, and orbit
//! decomposition of vectors with divisibility labels.
//!
//! All arithmetic is exact. Rank-2 enumeration completes the square in
//! integers; higher ranks use a rational LDL decomposition with exact
//! bounds. No floating point, no lattice reduction.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::{Integer, Roots};
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::Rational;
use crate::{Error, Result};

/// A square integer matrix acting on column vectors (entry `[i][j]` is row
/// i, column j).
pub type IntMatrix = Vec<Vec<i64>>;

/// Which isometry group to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IsomGroup {
    O,
    SO,
}

impl std::str::FromStr for IsomGroup {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "O" => Ok(IsomGroup::O),
            "SO" => Ok(IsomGroup::SO),
            _ => Err(Error::arg(format!("unknown group {s:?}, expected O or SO"))),
        }
    }
}

/// An integral lattice given by a symmetric nondegenerate Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramLattice {
    gram: Vec<Vec<i64>>,
}

impl GramLattice {
    #[allow(clippy::needless_range_loop)]
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self> {
        let n = gram.len();
        if n == 0 || gram.iter().any(|row| row.len() != n) {
            return Err(Error::arg("Gram matrix must be square and nonempty"));
        }
        for i in 0..n {
            for j in 0..n {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::arg("Gram matrix must be symmetric"));
                }
            }
        }
        let l = GramLattice { gram };
        if l.det() == 0 {
            return Err(Error::arg("Gram matrix must be nondegenerate"));
        }
        Ok(l)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn det(&self) -> i64 {
        let n = self.rank();
        let m: Vec<Vec<i128>> = self
            .gram
            .iter()
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect();
        bareiss_i128(m, n) as i64
    }

    pub fn is_even(&self) -> bool {
        self.gram.iter().enumerate().all(|(i, row)| row[i] % 2 == 0)
    }

    pub fn is_positive_definite(&self) -> bool {
        let n = self.rank();
        (1..=n).all(|k| {
            let m: Vec<Vec<i128>> = (0..k)
                .map(|i| (0..k).map(|j| self.gram[i][j] as i128).collect())
                .collect();
            bareiss_i128(m, k) > 0
        })
    }

    pub fn norm(&self, x: &[i64]) -> i64 {
        let gx = self.gram_times(x);
        x.iter().zip(&gx).map(|(a, b)| a * b).sum()
    }

    pub fn bilinear(&self, x: &[i64], y: &[i64]) -> i64 {
        let gy = self.gram_times(y);
        x.iter().zip(&gy).map(|(a, b)| a * b).sum()
    }

    pub fn gram_times(&self, x: &[i64]) -> Vec<i64> {
        self.gram
            .iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}

fn bareiss_i128(mut a: Vec<Vec<i128>>, n: usize) -> i128 {
    if n == 0 {
        return 1;
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// All `x` with `x^T G x = norm` in a positive definite lattice, each
/// exactly once, sorted lexicographically.
pub fn enumerate_vectors(l: &GramLattice, norm: i64) -> Result<Vec<Vec<i64>>> {
    if norm <= 0 {
        return Err(Error::arg("norm must be positive"));
    }
    if !l.is_positive_definite() {
        return Err(Error::unsupported(
            "vector enumeration requires a positive definite Gram matrix",
        ));
    }
    let mut out = match l.rank() {
        1 => {
            let a = l.gram[0][0];
            let mut v = Vec::new();
            if norm % a == 0 {
                let q = norm / a;
                let s = q.sqrt();
                if s * s == q {
                    v.push(vec![-s]);
                    v.push(vec![s]);
                }
            }
            v
        }
        2 => enumerate_rank2(&l.gram, norm),
        _ => enumerate_ldl(l, norm),
    };
    out.sort();
    out.dedup();
    Ok(out)
}

fn enumerate_rank2(g: &[Vec<i64>], norm: i64) -> Vec<Vec<i64>> {
    let (a, b, c) = (g[0][0], g[0][1], g[1][1]);
    let det = a * c - b * b;
    // a*norm = (a x + b y)^2 + det y^2, so y^2 <= a*norm/det.
    let ymax = (a * norm / det).sqrt();
    let mut out = Vec::new();
    for y in -ymax..=ymax {
        // a x^2 + 2b y x + (c y^2 - norm) = 0
        let delta = a * norm - det * y * y;
        if delta < 0 {
            continue;
        }
        let s = delta.sqrt();
        if s * s != delta {
            continue;
        }
        for sign in [-1, 1] {
            let num = -b * y + sign * s;
            if num % a == 0 {
                out.push(vec![num / a, y]);
            }
            if s == 0 {
                break;
            }
        }
    }
    out
}

fn enumerate_ldl(l: &GramLattice, norm: i64) -> Vec<Vec<i64>> {
    let n = l.rank();
    // x^T G x = sum_i d_i (x_i + sum_{j>i} u[i][j] x_j)^2
    let mut d = vec![Rational::zero(); n];
    let mut u = vec![vec![Rational::zero(); n]; n];
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| big(l.gram[i][j])).collect())
        .collect();
    for i in 0..n {
        d[i] = a[i][i].clone();
        for j in i + 1..n {
            u[i][j] = &a[i][j] / &d[i];
        }
        for r in i + 1..n {
            for c in i + 1..n {
                let delta = &d[i] * &u[i][r] * &u[i][c];
                a[r][c] = &a[r][c] - &delta;
            }
        }
    }

    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    descend(&d, &u, n, &big(norm), &mut x, &mut out);
    out
}

fn descend(
    d: &[Rational],
    u: &[Vec<Rational>],
    level: usize,
    remaining: &Rational,
    x: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) {
    let i = level - 1;
    // center c_i = sum_{j>i} u[i][j] x_j
    let n = x.len();
    let mut center = Rational::zero();
    for j in i + 1..n {
        center += &u[i][j] * big(x[j]);
    }
    // d_i (x_i + c)^2 <= remaining
    let bound = remaining / &d[i];
    let limit = bound.to_integer().sqrt().to_i64().unwrap_or(0) + 2;
    let center_round = center.round().to_integer().to_i64().unwrap_or(0);
    for xi in (-center_round - limit)..=(-center_round + limit) {
        let shifted = big(xi) + &center;
        let term = &d[i] * &shifted * &shifted;
        if &term > remaining {
            continue;
        }
        let rest = remaining - &term;
        x[i] = xi;
        if i == 0 {
            if rest.is_zero() {
                out.push(x.clone());
            }
        } else {
            descend(d, u, i, &rest, x, out);
        }
    }
    x[i] = 0;
}

fn big(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

/// The full isometry group `O(L)` of a positive definite lattice of rank
/// <= 2, as matrices in a deterministic order. Closed under products and
/// inverses and contains plus and minus the identity.
pub fn isometry_group(l: &GramLattice) -> Result<Vec<IntMatrix>> {
    if !l.is_positive_definite() {
        return Err(Error::unsupported(
            "isometry groups require positive definite lattices",
        ));
    }
    match l.rank() {
        1 => Ok(vec![vec![vec![-1]], vec![vec![1]]]),
        2 => {
            let cols1 = enumerate_vectors(l, l.gram[0][0])?;
            let cols2 = enumerate_vectors(l, l.gram[1][1])?;
            let mut out = Vec::new();
            for c1 in &cols1 {
                for c2 in &cols2 {
                    if l.bilinear(c1, c2) == l.gram[0][1] {
                        out.push(vec![vec![c1[0], c2[0]], vec![c1[1], c2[1]]]);
                    }
                }
            }
            out.sort();
            Ok(out)
        }
        _ => Err(Error::unsupported(
            "isometry groups are computed for rank <= 2 only",
        )),
    }
}

/// The requested isometry group as a matrix list.
pub fn isometries(l: &GramLattice, group: IsomGroup) -> Result<Vec<IntMatrix>> {
    let all = isometry_group(l)?;
    Ok(match group {
        IsomGroup::O => all,
        IsomGroup::SO => all.into_iter().filter(|m| det2(m) == 1).collect(),
    })
}

fn det2(m: &IntMatrix) -> i64 {
    match m.len() {
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => unreachable!("isometry matrices have rank <= 2"),
    }
}

fn apply(m: &IntMatrix, x: &[i64]) -> Vec<i64> {
    m.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

/// Divisibility of a nonzero vector: the positive generator of the ideal
/// `b(x, L)`, realized as the gcd of the entries of `G x`.
pub fn vector_divisibility(l: &GramLattice, x: &[i64]) -> Result<i64> {
    if x.len() != l.rank() {
        return Err(Error::arg("vector length does not match the rank"));
    }
    if x.iter().all(|&v| v == 0) {
        return Err(Error::arg("divisibility of the zero vector is undefined"));
    }
    let gx = l.gram_times(x);
    Ok(gx.iter().fold(0i64, |acc, &v| acc.gcd(&v)).abs())
}

fn is_primitive(x: &[i64]) -> bool {
    x.iter().fold(0i64, |acc, &v| acc.gcd(&v)) == 1
}

/// One orbit of vectors under a finite isometry group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VectorOrbit {
    /// Lexicographically minimal member.
    pub representative: Vec<i64>,
    pub size: u64,
    pub norm: i64,
    pub divisibility: i64,
}

/// Partition the (primitive) vectors of the given norm into orbits of the
/// group, sorted by representative. Divisibility is constant on orbits,
/// which is asserted.
pub fn orbit_decomposition(
    l: &GramLattice,
    group: &[IntMatrix],
    norm: i64,
    primitive_only: bool,
) -> Result<Vec<VectorOrbit>> {
    let mut vectors = enumerate_vectors(l, norm)?;
    if primitive_only {
        vectors.retain(|x| is_primitive(x));
    }
    let index: BTreeMap<Vec<i64>, usize> = vectors
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    let mut seen = vec![false; vectors.len()];
    let mut orbits = Vec::new();
    for start in 0..vectors.len() {
        if seen[start] {
            continue;
        }
        let mut stack = vec![start];
        seen[start] = true;
        let mut members = Vec::new();
        while let Some(i) = stack.pop() {
            members.push(i);
            for m in group {
                let image = apply(m, &vectors[i]);
                let j = *index
                    .get(&image)
                    .expect("isometries permute vectors of fixed norm");
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        let rep = members.iter().map(|&i| &vectors[i]).min().unwrap().clone();
        let div = vector_divisibility(l, &rep)?;
        for &i in &members {
            assert_eq!(
                vector_divisibility(l, &vectors[i])?,
                div,
                "divisibility must be constant on orbits"
            );
        }
        orbits.push(VectorOrbit {
            representative: rep,
            size: members.len() as u64,
            norm,
            divisibility: div,
        });
    }
    orbits.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(orbits)
}

/// The exceptional half-norms `S_G`: values `k <= kmax` of the form
/// `m^2 v^2/2` where `v` generates the fixed line of some nontrivial
/// element of the group. Off this set every orbit of primitive vectors of
/// norm `2k` is free.
pub fn fixed_norm_set(l: &GramLattice, group: &[IntMatrix], kmax: i64) -> Result<BTreeSet<i64>> {
    if !l.is_positive_definite() || l.rank() > 2 {
        return Err(Error::unsupported(
            "fixed norm sets are computed for definite rank <= 2",
        ));
    }
    let mut base = BTreeSet::new();
    for m in group {
        if let Some(v) = fixed_line_generator(m) {
            let norm = l.norm(&v);
            base.insert(norm / 2);
        }
    }
    let mut out = BTreeSet::new();
    for k0 in base {
        let mut mult = 1i64;
        loop {
            let k = k0 * mult * mult;
            if k > kmax {
                break;
            }
            out.insert(k);
            mult += 1;
        }
    }
    Ok(out)
}

/// Primitive generator of `ker(1 - g)` when it is a line.
fn fixed_line_generator(m: &IntMatrix) -> Option<Vec<i64>> {
    let n = m.len();
    if n == 1 {
        return None; // rank 1 has only +-id, neither fixes a line properly
    }
    let a = m[0][0] - 1;
    let b = m[0][1];
    let c = m[1][0];
    let d = m[1][1] - 1;
    if a == 0 && b == 0 && c == 0 && d == 0 {
        return None; // identity
    }
    if a * d - b * c != 0 {
        return None; // trivial kernel
    }
    let v = if a != 0 || b != 0 {
        vec![-b, a]
    } else {
        vec![-d, c]
    };
    let g = v[0].gcd(&v[1]);
    Some(vec![v[0] / g, v[1] / g])
}

pub fn gram_a2() -> GramLattice {
    GramLattice::new(vec![vec![2, 1], vec![1, 2]]).expect("valid")
}

pub fn gram_k7() -> GramLattice {
    GramLattice::new(vec![vec![2, 1], vec![1, 4]]).expect("valid")
}

pub fn gram_f23a() -> GramLattice {
    GramLattice::new(vec![vec![2, 1], vec![1, 12]]).expect("valid")
}

pub fn gram_f23b() -> GramLattice {
    GramLattice::new(vec![vec![4, 1], vec![1, 6]]).expect("valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerate_a2_roots() {
        let a2 = gram_a2();
        let v = enumerate_vectors(&a2, 2).unwrap();
        assert_eq!(v.len(), 6);
        assert_eq!(
            v,
            vec![
                vec![-1, 0],
                vec![-1, 1],
                vec![0, -1],
                vec![0, 1],
                vec![1, -1],
                vec![1, 0],
            ]
        );
        // even lattice has no odd norms
        assert!(enumerate_vectors(&a2, 1).unwrap().is_empty());
        assert!(enumerate_vectors(&gram_f23b(), 2).unwrap().is_empty());
    }

    #[test]
    fn enumeration_rejects_indefinite() {
        let u = GramLattice::new(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert!(matches!(
            enumerate_vectors(&u, 2),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn rank3_enumeration_agrees_with_direct_count() {
        // A_2 (+) <6>; counts factor through the rank-2 case.
        let l = GramLattice::new(vec![vec![2, 1, 0], vec![1, 2, 0], vec![0, 0, 6]]).unwrap();
        let a2 = gram_a2();
        for norm in [2i64, 6, 8, 14] {
            let direct = enumerate_vectors(&l, norm).unwrap().len();
            let mut expected = enumerate_vectors(&a2, norm).unwrap().len();
            if norm > 6 {
                expected += 2 * enumerate_vectors(&a2, norm - 6).unwrap().len();
            } else if norm == 6 {
                expected += 2;
            }
            assert_eq!(direct, expected, "norm {norm}");
        }
    }

    #[test]
    fn isometry_group_orders() {
        assert_eq!(isometry_group(&gram_a2()).unwrap().len(), 12);
        assert_eq!(isometries(&gram_a2(), IsomGroup::SO).unwrap().len(), 6);
        // K_7 and F_23a admit one reflection pair beyond +-id.
        assert_eq!(isometry_group(&gram_k7()).unwrap().len(), 4);
        assert_eq!(isometries(&gram_k7(), IsomGroup::SO).unwrap().len(), 2);
        assert_eq!(isometry_group(&gram_f23a()).unwrap().len(), 4);
        assert_eq!(isometry_group(&gram_f23b()).unwrap().len(), 2);
    }

    #[test]
    fn isometry_groups_close_under_multiplication() {
        for l in [gram_a2(), gram_k7(), gram_f23a(), gram_f23b()] {
            let g = isometry_group(&l).unwrap();
            let set: std::collections::BTreeSet<_> = g.iter().cloned().collect();
            let id: IntMatrix = vec![vec![1, 0], vec![0, 1]];
            let neg: IntMatrix = vec![vec![-1, 0], vec![0, -1]];
            assert!(set.contains(&id));
            assert!(set.contains(&neg));
            for x in &g {
                for y in &g {
                    let prod: IntMatrix = (0..2)
                        .map(|i| {
                            (0..2)
                                .map(|j| (0..2).map(|t| x[i][t] * y[t][j]).sum())
                                .collect()
                        })
                        .collect();
                    assert!(set.contains(&prod));
                }
            }
            // every element preserves the Gram matrix
            for t in &g {
                for i in 0..2 {
                    for j in 0..2 {
                        let ei: Vec<i64> = (0..2).map(|r| t[r][i]).collect();
                        let ej: Vec<i64> = (0..2).map(|r| t[r][j]).collect();
                        assert_eq!(l.bilinear(&ei, &ej), l.gram()[i][j]);
                    }
                }
            }
        }
    }

    #[test]
    fn orbits_of_a2() {
        let a2 = gram_a2();
        let o = isometries(&a2, IsomGroup::O).unwrap();
        let so = isometries(&a2, IsomGroup::SO).unwrap();
        let roots = orbit_decomposition(&a2, &o, 2, true).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].size, 6);
        assert_eq!(roots[0].divisibility, 1);

        let norm14 = orbit_decomposition(&a2, &so, 14, true).unwrap();
        assert_eq!(norm14.len(), 2);

        let norm6 = orbit_decomposition(&a2, &o, 6, true).unwrap();
        assert_eq!(norm6.len(), 1);
        assert_eq!(norm6[0].divisibility, 3);
    }

    #[test]
    fn divisibility_examples() {
        let a2 = gram_a2();
        assert_eq!(vector_divisibility(&a2, &[1, 0]).unwrap(), 1);
        assert_eq!(vector_divisibility(&a2, &[1, 1]).unwrap(), 3);
        let r1 = GramLattice::new(vec![vec![12]]).unwrap();
        assert_eq!(vector_divisibility(&r1, &[1]).unwrap(), 12);
        assert!(vector_divisibility(&a2, &[0, 0]).is_err());
    }

    #[test]
    fn fixed_norm_sets() {
        let k7_so = isometries(&gram_k7(), IsomGroup::SO).unwrap();
        assert!(fixed_norm_set(&gram_k7(), &k7_so, 100).unwrap().is_empty());

        let a2_o = isometries(&gram_a2(), IsomGroup::O).unwrap();
        let s = fixed_norm_set(&gram_a2(), &a2_o, 30).unwrap();
        let expected: BTreeSet<i64> = [1, 3, 4, 9, 12, 16, 25, 27].into_iter().collect();
        assert_eq!(s, expected);

        let f23b_o = isometry_group(&gram_f23b()).unwrap();
        assert!(fixed_norm_set(&gram_f23b(), &f23b_o, 200)
            .unwrap()
            .is_empty());

        // F_23a has reflections fixing lines of norm 2 and 46.
        let f23a_o = isometry_group(&gram_f23a()).unwrap();
        let s = fixed_norm_set(&gram_f23a(), &f23a_o, 25).unwrap();
        let expected: BTreeSet<i64> = [1, 4, 9, 16, 23, 25].into_iter().collect();
        assert_eq!(s, expected);
    }
}
