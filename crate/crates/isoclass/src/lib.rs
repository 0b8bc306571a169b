//! Existence and conjugacy/orbit counting for odd-prime-order isometries of
//! unimodular and p-elementary integer lattices.
//!
//! The library answers questions of the following kind, all with exact
//! integer arithmetic:
//!
//! - does a p-elementary genus `II_(l+,l-)p^(eps n)` contain a lattice?
//! - does a unimodular lattice of signature `(l+,l-)` admit an isometry of
//!   odd prime order `p` with prescribed coinvariant invariants?
//! - how many conjugacy classes share those invariants (relative class
//!   numbers of prime cyclotomic fields)?
//! - does a p-elementary lattice contain a primitive vector of given square
//!   and divisibility, and in how many orbits under `O(L)`?
//! - exact theta series of the four definite rank-2 invariant lattices and
//!   orbit counts of their primitive vectors;
//! - the classification and ambiguity tables for non-symplectic
//!   automorphisms of the known hyperkähler deformation types.
//!
//! Everything is deterministic: identical queries produce byte-identical
//! output.

pub mod arith;
pub mod classnumber;
pub mod cli;
pub mod discforms;
pub mod embeddings;
pub mod ihs;
pub mod latgeom;
pub mod theta;
pub mod unimodular;

use thiserror::Error;

/// Library-wide error type.
///
/// `Argument` marks a violated domain precondition (CLI exit code 4),
/// `Unsupported` an input outside the supported range of an operation
/// (CLI exit code 3).
#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
}
