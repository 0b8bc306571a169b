//! Deformation-type registry and the classification and ambiguity
//! enumerators for non-symplectic automorphisms of odd prime order.
//!
//! Each known deformation type embeds its second cohomology into an even
//! unimodular lattice `M` with a fixed excess sublattice `V` and a group
//! (`O` or `SO`) controlling orbit identifications:
//!
//! | type  | M          | V              | group |
//! |-------|------------|----------------|-------|
//! | K3    | II_(3,19)  | -              | -     |
//! | K3n   | II_(4,20)  | <2n-2>         | O     |
//! | Kumn  | II_(4,4)   | <2n+2>         | SO    |
//! | OG6   | II_(5,5)   | <2> (+) <2>    | O     |
//! | OG10  | II_(5,21)  | rank-2, disc 3 | O     |
//!
//! A triple `(p, r, a)` records an isometry of `M` with invariant lattice
//! of rank `r` and discriminant `p^a`, coinvariant signature `(2, *)`.
//! Classification rows additionally locate `V` inside the invariant
//! lattice by square and divisibility; ambiguity asks where several
//! orbits share all numerical invariants.

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::classnumber::relative_class_number;
use crate::discforms::{forced_eps, ForcedEps, GenusSymbol, Parity};
use crate::embeddings::{
    a2_embeds, contains_u, vector_orbits, EmbeddingQuery, Existence, OrbitCount,
};
use crate::latgeom::{isometries, orbit_decomposition, IsomGroup};
use crate::theta::DefiniteLatticeId;
use crate::unimodular::{isometry_exists, k3_exists, IsometryInvariants};
use crate::{Error, Result};

/// The known deformation types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DeformationType {
    K3,
    K3n,
    Kumn,
    OG6,
    OG10,
}

impl std::str::FromStr for DeformationType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "K3" => Ok(DeformationType::K3),
            "K3n" => Ok(DeformationType::K3n),
            "Kumn" => Ok(DeformationType::Kumn),
            "OG6" => Ok(DeformationType::OG6),
            "OG10" => Ok(DeformationType::OG10),
            _ => Err(Error::arg(format!(
                "unknown deformation type {s:?}, expected K3, K3n, Kumn, OG6 or OG10"
            ))),
        }
    }
}

/// The excess sublattice `V <= M` orthogonal to the marked cohomology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExcessLattice {
    /// K3: no excess.
    None,
    /// rank 1, square `2n - 2`
    Rank1MinusTwo,
    /// rank 1, square `2n + 2`
    Rank1PlusTwo,
    /// `<2> (+) <2>`
    TwoByTwo,
    /// rank 2, even, discriminant 3
    A2Neg,
}

impl ExcessLattice {
    /// The square of the marked vector for manifold index `n`, when `V`
    /// has rank one.
    pub fn vector_square(self, n: u64) -> Option<i64> {
        match self {
            ExcessLattice::Rank1MinusTwo => Some(2 * n as i64 - 2),
            ExcessLattice::Rank1PlusTwo => Some(2 * n as i64 + 2),
            _ => None,
        }
    }
}

/// One registry row: ambient unimodular signature, excess lattice and the
/// orbit group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DeformationInfo {
    pub name: DeformationType,
    pub ambient: (u32, u32),
    pub excess: ExcessLattice,
    pub group: IsomGroup,
}

/// The registry of the known deformation types.
pub fn registry(t: DeformationType) -> DeformationInfo {
    match t {
        DeformationType::K3 => DeformationInfo {
            name: t,
            ambient: (3, 19),
            excess: ExcessLattice::None,
            group: IsomGroup::O,
        },
        DeformationType::K3n => DeformationInfo {
            name: t,
            ambient: (4, 20),
            excess: ExcessLattice::Rank1MinusTwo,
            group: IsomGroup::O,
        },
        DeformationType::Kumn => DeformationInfo {
            name: t,
            ambient: (4, 4),
            excess: ExcessLattice::Rank1PlusTwo,
            group: IsomGroup::SO,
        },
        DeformationType::OG6 => DeformationInfo {
            name: t,
            ambient: (5, 5),
            excess: ExcessLattice::TwoByTwo,
            group: IsomGroup::O,
        },
        DeformationType::OG10 => DeformationInfo {
            name: t,
            ambient: (5, 21),
            excess: ExcessLattice::A2Neg,
            group: IsomGroup::O,
        },
    }
}

/// One classification row, serialized with the stable column order
/// `type, p, r, a, div, exists, orbits, ambiguous, steinitz`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationRow {
    #[serde(rename = "type")]
    pub deformation_type: DeformationType,
    pub p: i64,
    pub r: u32,
    pub a: u32,
    pub div: Option<i64>,
    pub exists: bool,
    pub orbits: Option<u64>,
    pub ambiguous: Option<bool>,
    pub steinitz: u64,
}

impl ClassificationRow {
    pub fn csv_header() -> &'static str {
        "type,p,r,a,div,exists,orbits,ambiguous,steinitz"
    }

    pub fn to_csv(&self) -> String {
        fn opt<T: std::fmt::Display>(v: &Option<T>) -> String {
            v.as_ref().map_or(String::new(), |x| x.to_string())
        }
        format!(
            "{:?},{},{},{},{},{},{},{},{}",
            self.deformation_type,
            self.p,
            self.r,
            self.a,
            opt(&self.div),
            self.exists,
            opt(&self.orbits),
            opt(&self.ambiguous),
            self.steinitz
        )
    }
}

fn steinitz_factor(p: i64) -> Result<u64> {
    relative_class_number(p)?
        .to_u64()
        .ok_or_else(|| Error::unsupported("relative class number exceeds u64"))
}

/// Does the triple `(p, r, a)` occur for the ambient lattice of the type,
/// with coinvariant signature `(2, rank - r - 2)`?
fn triple_exists(info: &DeformationInfo, p: i64, r: u32, a: u32) -> bool {
    let (l_plus, l_minus) = info.ambient;
    let rank = i64::from(l_plus + l_minus);
    isometry_exists(&IsometryInvariants {
        p,
        parity: Parity::Even,
        l_plus: i64::from(l_plus),
        l_minus: i64::from(l_minus),
        s_plus: 2,
        s_minus: rank - i64::from(r) - 2,
        n: i64::from(a),
    })
}

/// Genus of the invariant lattice `M^f` for an existing triple: signature
/// `(2, r-2)` for the rank-24 and rank-8 ambients, `(3, r-3)` for the
/// rank-26 one, with eps pinned by the discriminant congruence.
fn invariant_genus(info: &DeformationInfo, p: i64, r: u32, a: u32) -> Result<GenusSymbol> {
    let inv_plus = info.ambient.0 - 2;
    if r < inv_plus {
        return Err(Error::arg("invariant rank below its positive signature"));
    }
    let sig = (inv_plus, r - inv_plus);
    let eps = match forced_eps(Parity::Even, sig.0, sig.1, p, a) {
        ForcedEps::Plus => 1,
        ForcedEps::Minus => -1,
        ForcedEps::Both => 1,
        ForcedEps::None => {
            return Err(Error::arg(format!(
                "no invariant genus with signature ({},{}) and discriminant {p}^{a}",
                sig.0, sig.1
            )))
        }
    };
    GenusSymbol::even(sig.0, sig.1, p, eps, a)
}

/// Isometry classes of the definite rank-2 invariant genera, per the
/// uniqueness analysis of the six relevant unimodular ambients.
fn definite_rank2_classes(p: i64, eps: i64, n: u32) -> Result<Vec<DefiniteLatticeId>> {
    match (p, eps, n) {
        (3, -1, 1) => Ok(vec![DefiniteLatticeId::A2neg]),
        (7, 1, 1) => Ok(vec![DefiniteLatticeId::K7]),
        (23, 1, 1) => Ok(vec![DefiniteLatticeId::F23a, DefiniteLatticeId::F23b]),
        _ => Err(Error::unsupported(format!(
            "no class list for the definite genus II_(2,0){p}^({eps}){n}"
        ))),
    }
}

/// Orbit counts per divisibility, pooled over the isometry classes of a
/// definite rank-2 invariant genus.
fn definite_orbit_counts(
    classes: &[DefiniteLatticeId],
    group: IsomGroup,
    square: i64,
) -> Result<std::collections::BTreeMap<i64, u64>> {
    let mut counts = std::collections::BTreeMap::new();
    for id in classes {
        let lattice = id.gram();
        let matrices = isometries(&lattice, group)?;
        for orbit in orbit_decomposition(&lattice, &matrices, square, true)? {
            *counts.entry(orbit.divisibility).or_insert(0) += 1;
        }
    }
    Ok(counts)
}

/// Classification rows for one deformation type and prime.
///
/// Without a manifold index the rows list the existing triples `(p, r, a)`.
/// With `n` given (types with rank-1 excess), each row additionally fixes
/// the divisibility of the marked vector of square `2n-2` / `2n+2` and
/// carries its orbit count and ambiguity flag. Type OG10 rows locate the
/// rank-2 excess lattice instead (divisibility 1 or 3, always one orbit).
/// Type K3 delegates to the K3 existence criterion; OG6 is not classified
/// here.
pub fn classify(
    t: DeformationType,
    p: i64,
    n_manifold: Option<u64>,
) -> Result<Vec<ClassificationRow>> {
    let info = registry(t);
    match t {
        DeformationType::OG6 => Err(Error::unsupported(
            "OG6 vector orbits are not classified here; only the registry entry is provided",
        )),
        DeformationType::K3 => {
            let steinitz = steinitz_factor(p)?;
            let mut rows = Vec::new();
            for r in 1..=21 {
                for a in 0..=21 {
                    if k3_exists(p, r, a) {
                        rows.push(ClassificationRow {
                            deformation_type: t,
                            p,
                            r: r as u32,
                            a: a as u32,
                            div: None,
                            exists: true,
                            orbits: None,
                            ambiguous: None,
                            steinitz,
                        });
                    }
                }
            }
            Ok(rows)
        }
        DeformationType::K3n | DeformationType::Kumn => {
            if let Some(n) = n_manifold {
                if n < 2 {
                    return Err(Error::arg("manifold index n must be at least 2"));
                }
            }
            let steinitz = steinitz_factor(p)?;
            let rank = info.ambient.0 + info.ambient.1;
            let mut rows = Vec::new();
            for r in 2..=rank - 2 {
                for a in 0..=r {
                    if !triple_exists(&info, p, r, a) {
                        continue;
                    }
                    let genus = invariant_genus(&info, p, r, a)?;
                    match n_manifold {
                        None => rows.push(ClassificationRow {
                            deformation_type: t,
                            p,
                            r,
                            a,
                            div: None,
                            exists: true,
                            orbits: None,
                            ambiguous: None,
                            steinitz,
                        }),
                        Some(n) => {
                            let square = info.excess.vector_square(n).expect("rank-1 excess");
                            for div in [1, p] {
                                let (orbits, ambiguous) = if genus.l_minus == 0 {
                                    let classes = definite_rank2_classes(p, genus.eps, a)?;
                                    let counts =
                                        definite_orbit_counts(&classes, info.group, square)?;
                                    let c = counts.get(&div).copied().unwrap_or(0);
                                    if c == 0 {
                                        continue;
                                    }
                                    (Some(c), Some(c >= 2))
                                } else {
                                    let query = EmbeddingQuery {
                                        genus,
                                        k: square as u64,
                                        div,
                                    };
                                    let report = vector_orbits(&query)?;
                                    if report.exists == Existence::No {
                                        continue;
                                    }
                                    (
                                        report.orbit_count.as_number(),
                                        Some(report.orbit_count == OrbitCount::Two),
                                    )
                                };
                                rows.push(ClassificationRow {
                                    deformation_type: t,
                                    p,
                                    r,
                                    a,
                                    div: Some(div),
                                    exists: true,
                                    orbits,
                                    ambiguous,
                                    steinitz,
                                });
                            }
                        }
                    }
                }
            }
            Ok(rows)
        }
        DeformationType::OG10 => Ok(og10_rows(p)?),
    }
}

/// Rows for the rank-26 ambient: existing triples with the divisibility of
/// the primitively embedded rank-2 excess lattice. The embedding is unique
/// up to the orthogonal group for each divisibility, so rows are never
/// orbit-ambiguous; conjugacy multiplicity enters only through the
/// Steinitz factor.
pub fn og10_rows(p: i64) -> Result<Vec<ClassificationRow>> {
    let info = registry(DeformationType::OG10);
    let steinitz = steinitz_factor(p)?;
    let rank = info.ambient.0 + info.ambient.1;
    let mut rows = Vec::new();
    for r in 4..=rank - 2 {
        for a in 0..=r {
            if !triple_exists(&info, p, r, a) {
                continue;
            }
            let genus = invariant_genus(&info, p, r, a)?;
            for div in [1, 3] {
                if a2_embeds(genus.l_minus, p, genus.eps, a, div)? {
                    rows.push(ClassificationRow {
                        deformation_type: DeformationType::OG10,
                        p,
                        r,
                        a,
                        div: Some(div),
                        exists: true,
                        orbits: Some(1),
                        ambiguous: Some(false),
                        steinitz,
                    });
                }
            }
        }
    }
    Ok(rows)
}

/// Manifold indices `2 <= n <= n_max` where the pair count for the triple
/// `(p, r, a)` at the given divisibility is at least two: orbits of the
/// marked vector pooled over the isometry classes of the invariant genus,
/// grouped by divisibility. `div = None` flags ambiguity when any
/// divisibility group has two or more members.
///
/// Supported shapes: `r = 2` (definite invariant lattice, counted by the
/// enumeration oracle) and `r = 4` with indefinite invariant lattice
/// (counted by the spinor-exception criterion).
pub fn ambiguous_n(
    t: DeformationType,
    p: i64,
    r: u32,
    a: u32,
    div: Option<i64>,
    n_max: u64,
) -> Result<Vec<u64>> {
    let info = registry(t);
    if !matches!(t, DeformationType::K3n | DeformationType::Kumn) {
        return Err(Error::unsupported(
            "ambiguity sweeps are defined for the types with rank-1 excess",
        ));
    }
    if !triple_exists(&info, p, r, a) {
        return Err(Error::arg(format!(
            "triple ({p},{r},{a}) does not exist for {t:?}"
        )));
    }
    if let Some(d) = div {
        if d != 1 && d != p {
            return Err(Error::arg("divisibility must be 1 or p"));
        }
    }
    let genus = invariant_genus(&info, p, r, a)?;
    let shape = ambiguity_shape(&genus, p, r, a)?;
    let mut out = Vec::new();
    for n in 2..=n_max {
        if ambiguous_at(&info, &genus, &shape, div, n)? {
            out.push(n);
        }
    }
    Ok(out)
}

enum AmbiguityShape {
    Definite(Vec<DefiniteLatticeId>),
    IndefiniteRank4,
}

fn ambiguity_shape(genus: &GenusSymbol, p: i64, r: u32, a: u32) -> Result<AmbiguityShape> {
    match r {
        2 => Ok(AmbiguityShape::Definite(definite_rank2_classes(
            p, genus.eps, a,
        )?)),
        4 if genus.l_minus >= 1 => Ok(AmbiguityShape::IndefiniteRank4),
        _ => Err(Error::unsupported(
            "supported ambiguity shapes: r = 2 (definite) and r = 4 (indefinite rank 4)",
        )),
    }
}

fn ambiguous_at(
    info: &DeformationInfo,
    genus: &GenusSymbol,
    shape: &AmbiguityShape,
    div: Option<i64>,
    n: u64,
) -> Result<bool> {
    let square = info.excess.vector_square(n).expect("rank-1 excess");
    match shape {
        AmbiguityShape::Definite(classes) => {
            let counts = definite_orbit_counts(classes, info.group, square)?;
            Ok(match div {
                Some(d) => counts.get(&d).copied().unwrap_or(0) >= 2,
                None => counts.values().any(|&c| c >= 2),
            })
        }
        AmbiguityShape::IndefiniteRank4 => {
            let div_values: Vec<i64> = match div {
                Some(d) => vec![d],
                None => vec![1, genus.p],
            };
            for d in div_values {
                let report = vector_orbits(&EmbeddingQuery {
                    genus: *genus,
                    k: square as u64,
                    div: d,
                })?;
                if report.orbit_count == OrbitCount::Two {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

/// Ambiguity of one triple at one manifold index, with the Steinitz
/// multiplicity reported as a separate factor (it is never folded into
/// the orbit-based flag).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AmbiguityVerdict {
    pub lattice_orbit_ambiguous: bool,
    pub steinitz_factor: u64,
}

/// The ambiguity verdict for `(p, r, a)` at manifold index `n >= 2`.
pub fn ambiguity_verdict(
    t: DeformationType,
    p: i64,
    r: u32,
    a: u32,
    div: Option<i64>,
    n: u64,
) -> Result<AmbiguityVerdict> {
    if n < 2 {
        return Err(Error::arg("manifold index n must be at least 2"));
    }
    let info = registry(t);
    if !matches!(t, DeformationType::K3n | DeformationType::Kumn) {
        return Err(Error::unsupported(
            "ambiguity verdicts are defined for the types with rank-1 excess",
        ));
    }
    if !triple_exists(&info, p, r, a) {
        return Err(Error::arg(format!(
            "triple ({p},{r},{a}) does not exist for {t:?}"
        )));
    }
    let genus = invariant_genus(&info, p, r, a)?;
    let shape = ambiguity_shape(&genus, p, r, a)?;
    Ok(AmbiguityVerdict {
        lattice_orbit_ambiguous: ambiguous_at(&info, &genus, &shape, div, n)?,
        steinitz_factor: steinitz_factor(p)?,
    })
}

/// Can the triple be realized by induced automorphisms, i.e. does the
/// invariant lattice contain a hyperbolic plane as a direct summand?
pub fn induced_realizable(t: DeformationType, p: i64, r: u32, a: u32) -> Result<bool> {
    if !matches!(t, DeformationType::K3n | DeformationType::Kumn) {
        return Err(Error::unsupported(
            "induced realizability is defined for the types with rank-1 excess",
        ));
    }
    let info = registry(t);
    if !triple_exists(&info, p, r, a) {
        return Err(Error::arg(format!(
            "triple ({p},{r},{a}) does not exist for {t:?}"
        )));
    }
    let genus = invariant_genus(&info, p, r, a)?;
    contains_u(&genus)
}

/// All existing triples `(p, r, a)` for a type, over odd primes up to
/// `p_max` and ranks up to `r_max`.
pub fn existing_triples(t: DeformationType, p_max: i64, r_max: u32) -> Vec<(i64, u32, u32)> {
    let info = registry(t);
    let mut out = Vec::new();
    for p in (3..=p_max).filter(|&p| crate::arith::is_odd_prime(p)) {
        for r in 2..=r_max.min(info.ambient.0 + info.ambient.1) {
            for a in 0..=r {
                if triple_exists(&info, p, r, a) {
                    out.push((p, r, a));
                }
            }
        }
    }
    out
}
