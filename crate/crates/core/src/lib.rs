//! Integral homology of sphere quotients by permutation groups, and the
//! relative cellular spectral sequence of the moduli spaces `Δ_{g,n}` of
//! stable tropical curves.
//!
//! The pipeline runs bottom-up: [`stablegraphs`] enumerates the cells of
//! `Δ_{g,n}` and their symmetry groups, [`spherequotient`] triangulates each
//! `S^{p-1}/G`, [`homology`] reduces the resulting boundary matrices exactly,
//! and [`spectral`] assembles the `E_1` page and certifies what order
//! counting alone can decide.

pub mod error;
pub mod homology;
pub mod permgroup;
pub mod spherequotient;
pub mod spectral;
pub mod stablegraphs;

pub use error::{Error, Result};
pub use homology::{HomologyGroup, SnfScalar, SparseMatrix};
pub use permgroup::{PermGroup, Permutation, SubsetChain};
pub use spectral::{DeltaReport, E1Page, TorsionReport};
pub use stablegraphs::StableGraph;

/// Boundary matrices as emitted by the complex builder.
pub type BoundaryMatrix = SparseMatrix<i64>;
/// Matrices with unbounded entries, e.g. parsed from triplet JSON.
pub type BigIntMatrix = SparseMatrix<num_bigint::BigInt>;
