//! Exact integral homology of bounded chain complexes of free abelian groups.

pub mod scalar;
pub mod snf;
pub mod sparse;

use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use scalar::SnfScalar;
pub use snf::{smith_diagonal, smith_summary, SmithSummary};
pub use sparse::{SparseMatrix, TripletMatrix};

use crate::error::{Error, Result};
use crate::permgroup::{contains_transposition, PermGroup};
use crate::spherequotient::{self, SubdivisionLevel};

/// A finitely generated abelian group `ℤ^rank ⊕ ⊕ ℤ/d_i`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub rank: usize,
    /// Invariant factors, each at least 2 and dividing the next.
    #[serde(rename = "torsion", with = "factor_list")]
    pub invariant_factors: Vec<BigUint>,
}

impl HomologyGroup {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        Self {
            rank,
            invariant_factors: Vec::new(),
        }
    }

    pub fn torsion(factors: &[u64]) -> Self {
        Self {
            rank: 0,
            invariant_factors: factors.iter().map(|&d| BigUint::from(d)).collect(),
        }
    }

    pub fn new(rank: usize, invariant_factors: Vec<BigUint>) -> Self {
        Self {
            rank,
            invariant_factors,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigUint {
        self.invariant_factors.iter().product()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("ℤ".to_string()),
            r => parts.push(format!("ℤ^{r}")),
        }
        for d in &self.invariant_factors {
            parts.push(format!("ℤ/{d}ℤ"));
        }
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// Serializes factors as JSON numbers when they fit in `u64`, as decimal
/// strings otherwise.
mod factor_list {
    use super::*;

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Factor {
        Small(u64),
        Big(String),
    }

    pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
        let items: Vec<Factor> = v
            .iter()
            .map(|d| match d.to_u64() {
                Some(x) => Factor::Small(x),
                None => Factor::Big(d.to_string()),
            })
            .collect();
        items.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigUint>, D::Error> {
        let items = Vec::<Factor>::deserialize(d)?;
        items
            .into_iter()
            .map(|f| match f {
                Factor::Small(x) => Ok(BigUint::from(x)),
                Factor::Big(s) => s.parse().map_err(serde::de::Error::custom),
            })
            .collect()
    }
}

/// Homology at the middle of `C_{k+1} --d_k1--> C_k --d_k--> C_{k-1}`.
pub fn homology_at<T: SnfScalar>(d_k: &SparseMatrix<T>, d_k1: &SparseMatrix<T>) -> Result<HomologyGroup> {
    if d_k.cols() != d_k1.rows() {
        return Err(Error::Shape(format!(
            "d_k has {} columns but d_(k+1) has {} rows",
            d_k.cols(),
            d_k1.rows()
        )));
    }
    if !d_k.mul(d_k1)?.is_zero() {
        return Err(Error::NonzeroComposite { degree: 0 });
    }
    let out = smith_summary(d_k);
    let inc = smith_summary(d_k1);
    Ok(assemble(d_k.cols(), &out, &inc))
}

fn assemble(chain_rank: usize, outgoing: &SmithSummary, incoming: &SmithSummary) -> HomologyGroup {
    HomologyGroup {
        rank: chain_rank - outgoing.rank - incoming.rank,
        invariant_factors: incoming.factors.clone(),
    }
}

/// Homology of `C_top → … → C_0 → C_{-1}` given `boundaries[k]: C_k → C_{k-1}`.
///
/// With an augmentation as `boundaries[0]` the result is reduced homology;
/// with a zero-row matrix it is ordinary homology. Each matrix is reduced
/// once, independently of the others, and consecutive composites are
/// checked to vanish.
pub fn homology_of_complex<T: SnfScalar>(boundaries: &[SparseMatrix<T>]) -> Result<Vec<HomologyGroup>> {
    for k in 1..boundaries.len() {
        if boundaries[k].rows() != boundaries[k - 1].cols() {
            return Err(Error::Shape(format!(
                "boundary {k} has {} rows but boundary {} has {} columns",
                boundaries[k].rows(),
                k - 1,
                boundaries[k - 1].cols()
            )));
        }
    }
    (1..boundaries.len())
        .into_par_iter()
        .try_for_each(|k| {
            if boundaries[k - 1].mul(&boundaries[k])?.is_zero() {
                Ok(())
            } else {
                Err(Error::NonzeroComposite { degree: k })
            }
        })?;
    let summaries: Vec<SmithSummary> = boundaries
        .par_iter()
        .map(|d| {
            let s = smith_summary(d);
            log::info!("{}x{} boundary: rank {}, factors {:?}", d.rows(), d.cols(), s.rank, s.factors);
            s
        })
        .collect();
    let top = boundaries.len();
    Ok((0..top)
        .map(|k| {
            let none = SmithSummary {
                rows: boundaries[k].cols(),
                cols: 0,
                rank: 0,
                factors: Vec::new(),
            };
            let incoming = summaries.get(k + 1).unwrap_or(&none);
            assemble(boundaries[k].cols(), &summaries[k], incoming)
        })
        .collect())
}

/// Options for [`reduced_sphere_quotient_homology`].
#[derive(Clone, Copy, Debug)]
pub struct SphereQuotientOptions {
    pub level: SubdivisionLevel,
    /// Return zero immediately when the group contains a transposition.
    pub shortcut: bool,
}

impl Default for SphereQuotientOptions {
    fn default() -> Self {
        Self {
            level: SubdivisionLevel::Once,
            shortcut: true,
        }
    }
}

/// Reduced integral homology of `S^{p-1}/G` in degrees `0..p`, where `G`
/// permutes the `p + 1` vertices of `Δ^p`.
///
/// A transposition acts on the simplex as a reflection, which makes the
/// quotient contractible; with `shortcut` set that case skips the build.
pub fn reduced_sphere_quotient_homology(
    p: usize,
    group: &PermGroup,
    options: SphereQuotientOptions,
) -> Result<Vec<HomologyGroup>> {
    if p < 1 {
        return Err(Error::InvalidDimension(p));
    }
    if group.degree() != p + 1 {
        return Err(Error::DegreeMismatch {
            expected: p + 1,
            found: group.degree(),
        });
    }
    if options.shortcut && contains_transposition(group) {
        return Ok(vec![HomologyGroup::zero(); p]);
    }
    let complex = spherequotient::build(p, group, options.level)?;
    complex.reduced_homology()
}
