//! Δ-complex structure on `∂Δ^p / G` induced by barycentric subdivision.
//!
//! The subdivision of `∂Δ^p` is the order complex of the poset of nonempty
//! proper subsets of `{0..p}`: its `k`-simplices are chains of `k + 1` subsets.
//! Level 2 subdivides once more, taking the order complex of the face poset
//! of the level-1 complex. In both cases the vertices of a simplex carry
//! distinct ranks (cardinality, resp. chain length) which every group element
//! preserves, so a stabilizer fixes its simplex pointwise and the orbit
//! complex is an honest Δ-complex for the quotient.
//!
//! Simplices are stored as orbit minima under lexicographic order on the
//! vertex indices. They are enumerated orbit-first: a chain is canonical only
//! if every prefix is, so a depth-first extension that tracks the stabilizer
//! of the current prefix visits canonical chains only.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology::{
    homology_of_complex, sparse::TripletMatrix, HomologyGroup, SparseMatrix,
};
use crate::permgroup::{cmp_subsets, PermGroup, SubsetChain};

/// A finite poset with a rank function and a group action, given explicitly.
struct ChainPoset {
    /// Vertex labels: one mask for level 1, the subset chain for level 2.
    labels: Vec<Vec<u32>>,
    /// Elements strictly above each element, ascending.
    up: Vec<Vec<u32>>,
    /// `action[g * n + x]` is the image of `x` under group element `g`.
    action: Vec<u32>,
    order: usize,
    width: u32,
}

impl ChainPoset {
    fn len(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    fn act(&self, g: usize, x: u32) -> u32 {
        self.action[g * self.labels.len() + x as usize]
    }

    fn subsets(degree: usize, group: &PermGroup) -> Self {
        let full = (1u32 << degree) - 1;
        let mut masks: Vec<u32> = (1..full).collect();
        masks.sort_by(|&a, &b| cmp_subsets(a, b));
        let mut id = vec![u32::MAX; 1 << degree];
        for (i, &m) in masks.iter().enumerate() {
            id[m as usize] = i as u32;
        }
        let up = masks
            .iter()
            .map(|&a| {
                (0..masks.len() as u32)
                    .filter(|&j| {
                        let b = masks[j as usize];
                        a != b && a & !b == 0
                    })
                    .collect()
            })
            .collect();
        let mut action = Vec::with_capacity(group.order() * masks.len());
        for g in group.elements() {
            action.extend(masks.iter().map(|&m| id[g.apply_mask(m) as usize]));
        }
        Self::finish(masks.into_iter().map(|m| vec![m]).collect(), up, action, group.order())
    }

    /// Face poset of the level-1 complex: all chains of nonempty proper subsets.
    fn subset_chains(degree: usize, group: &PermGroup) -> Self {
        let base = Self::subsets(degree, &PermGroup::trivial(degree));
        let mut chains: Vec<Vec<u32>> = Vec::new();
        fn extend(base: &ChainPoset, chain: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            out.push(chain.clone());
            let last = *chain.last().unwrap();
            for &y in &base.up[last as usize] {
                chain.push(y);
                extend(base, chain, out);
                chain.pop();
            }
        }
        for x in 0..base.len() as u32 {
            extend(&base, &mut vec![x], &mut chains);
        }
        chains.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let index: std::collections::HashMap<Vec<u32>, u32> = chains
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i as u32))
            .collect();

        let mut up: Vec<Vec<u32>> = vec![Vec::new(); chains.len()];
        for (j, c) in chains.iter().enumerate() {
            let len = c.len();
            for sel in 1..(1u32 << len) - 1 {
                let sub: Vec<u32> = (0..len)
                    .filter(|&t| sel >> t & 1 == 1)
                    .map(|t| c[t])
                    .collect();
                up[index[&sub] as usize].push(j as u32);
            }
        }
        for u in &mut up {
            u.sort_unstable();
        }

        let masks: Vec<u32> = base.labels.iter().map(|l| l[0]).collect();
        let mut action = Vec::with_capacity(group.order() * chains.len());
        let mut mask_id = vec![u32::MAX; 1 << degree];
        for (i, &m) in masks.iter().enumerate() {
            mask_id[m as usize] = i as u32;
        }
        for g in group.elements() {
            for c in &chains {
                let image: Vec<u32> = c
                    .iter()
                    .map(|&x| mask_id[g.apply_mask(masks[x as usize]) as usize])
                    .collect();
                action.push(index[&image]);
            }
        }
        let labels = chains
            .iter()
            .map(|c| c.iter().map(|&x| masks[x as usize]).collect())
            .collect();
        Self::finish(labels, up, action, group.order())
    }

    fn finish(labels: Vec<Vec<u32>>, up: Vec<Vec<u32>>, action: Vec<u32>, order: usize) -> Self {
        let n = labels.len().max(2);
        let width = usize::BITS - (n - 1).leading_zeros();
        Self {
            labels,
            up,
            action,
            order,
            width,
        }
    }

    fn pack(&self, chain: &[u32]) -> u128 {
        chain
            .iter()
            .fold(0u128, |k, &x| (k << self.width) | x as u128)
    }

    fn unpack(&self, key: u128, len: usize, out: &mut [u32]) {
        let mask = (1u128 << self.width) - 1;
        for (j, x) in out[..len].iter_mut().enumerate() {
            let shift = self.width as usize * (len - 1 - j);
            *x = ((key >> shift) & mask) as u32;
        }
    }

    /// Lexicographically least image of `chain` under the group, packed.
    fn canonical_key(&self, chain: &[u32]) -> u128 {
        let len = chain.len();
        let mut best = [u32::MAX; MAX_CHAIN];
        let mut image = [0u32; MAX_CHAIN];
        'group: for g in 0..self.order {
            let mut smaller = false;
            for j in 0..len {
                let v = self.act(g, chain[j]);
                if !smaller {
                    if v > best[j] {
                        continue 'group;
                    }
                    if v < best[j] {
                        smaller = true;
                    }
                }
                image[j] = v;
            }
            if smaller {
                best[..len].copy_from_slice(&image[..len]);
            }
        }
        self.pack(&best[..len])
    }

    /// Canonical chains reachable from a canonical prefix, appended per length.
    fn extend_canonical(
        &self,
        chain: &mut Vec<u32>,
        stab: &[u32],
        max_len: usize,
        out: &mut [Vec<u128>],
    ) {
        out[chain.len() - 1].push(self.pack(chain));
        if chain.len() == max_len {
            return;
        }
        let last = *chain.last().unwrap() as usize;
        let mut next_stab = Vec::with_capacity(stab.len());
        'candidates: for &y in &self.up[last] {
            next_stab.clear();
            for &g in stab {
                let gy = self.act(g as usize, y);
                if gy < y {
                    continue 'candidates;
                }
                if gy == y {
                    next_stab.push(g);
                }
            }
            chain.push(y);
            let s = next_stab.clone();
            self.extend_canonical(chain, &s, max_len, out);
            chain.pop();
        }
    }
}

const MAX_CHAIN: usize = 32;

/// Subdivision depth applied to `∂Δ^p` before taking the quotient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SubdivisionLevel {
    Once,
    Twice,
}

impl SubdivisionLevel {
    pub fn from_u8(level: u8) -> Result<Self> {
        match level {
            1 => Ok(Self::Once),
            2 => Ok(Self::Twice),
            other => Err(Error::InvalidLevel(other)),
        }
    }

    pub fn as_u8(self) -> u8 {
        match self {
            Self::Once => 1,
            Self::Twice => 2,
        }
    }
}

/// The orbit complex of a subdivided `∂Δ^p` under a permutation group.
pub struct QuotientComplex {
    p: usize,
    group: PermGroup,
    level: SubdivisionLevel,
    poset: ChainPoset,
    /// Per dimension, sorted packed keys of the canonical simplices.
    simplices: Vec<Vec<u128>>,
    /// `boundaries[k]` maps `k`-chains to `(k-1)`-chains; index 0 is the augmentation.
    boundaries: Vec<SparseMatrix<i64>>,
}

/// Builds the quotient complex of `∂Δ^p` by `group`, a group on the `p + 1`
/// vertices of the simplex.
pub fn build(p: usize, group: &PermGroup, level: SubdivisionLevel) -> Result<QuotientComplex> {
    if p < 1 {
        return Err(Error::InvalidDimension(p));
    }
    if group.degree() != p + 1 {
        return Err(Error::DegreeMismatch {
            expected: p + 1,
            found: group.degree(),
        });
    }
    let degree = p + 1;
    if degree > 16 {
        return Err(Error::TooLarge(format!("simplex on {degree} vertices")));
    }
    let poset = match level {
        SubdivisionLevel::Once => ChainPoset::subsets(degree, group),
        SubdivisionLevel::Twice => ChainPoset::subset_chains(degree, group),
    };
    // chains in either poset have at most p elements
    let max_len = p;
    if poset.width as usize * max_len > 128 || max_len > MAX_CHAIN {
        return Err(Error::TooLarge(format!(
            "chains of {max_len} elements from a poset of {} elements do not fit a 128-bit key",
            poset.len()
        )));
    }

    let per_root: Vec<Vec<Vec<u128>>> = (0..poset.len() as u32)
        .into_par_iter()
        .map(|x| {
            let mut out = vec![Vec::new(); max_len];
            let mut stab = Vec::new();
            for g in 0..poset.order {
                let gx = poset.act(g, x);
                if gx < x {
                    return out;
                }
                if gx == x {
                    stab.push(g as u32);
                }
            }
            poset.extend_canonical(&mut vec![x], &stab, max_len, &mut out);
            out
        })
        .collect();
    let mut simplices: Vec<Vec<u128>> = vec![Vec::new(); max_len];
    for root in per_root {
        for (k, keys) in root.into_iter().enumerate() {
            simplices[k].extend(keys);
        }
    }
    for keys in &simplices {
        debug_assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }
    log::info!(
        "quotient of boundary of Δ^{p} by group of order {} (level {}): orbit counts {:?}",
        group.order(),
        level.as_u8(),
        simplices.iter().map(Vec::len).collect::<Vec<_>>()
    );

    let mut boundaries = Vec::with_capacity(max_len);
    let n0 = simplices[0].len();
    boundaries.push(SparseMatrix::from_columns(1, vec![vec![(0, 1i64)]; n0])?);
    for k in 1..max_len {
        boundaries.push(boundary_matrix(&poset, &simplices[k - 1], &simplices[k], k)?);
    }

    Ok(QuotientComplex {
        p,
        group: group.clone(),
        level,
        poset,
        simplices,
        boundaries,
    })
}

fn boundary_matrix(
    poset: &ChainPoset,
    faces: &[u128],
    cells: &[u128],
    k: usize,
) -> Result<SparseMatrix<i64>> {
    let columns: Vec<Vec<(u32, i64)>> = cells
        .par_iter()
        .map(|&key| {
            let mut chain = [0u32; MAX_CHAIN];
            poset.unpack(key, k + 1, &mut chain);
            let mut face = [0u32; MAX_CHAIN];
            let mut col = Vec::with_capacity(k + 1);
            for omit in 0..=k {
                let mut t = 0;
                for (j, &x) in chain[..=k].iter().enumerate() {
                    if j != omit {
                        face[t] = x;
                        t += 1;
                    }
                }
                let canon = poset.canonical_key(&face[..k]);
                let row = faces
                    .binary_search(&canon)
                    .expect("every face orbit is enumerated");
                let sign = if omit % 2 == 0 { 1 } else { -1 };
                col.push((row as u32, sign));
            }
            col
        })
        .collect();
    SparseMatrix::from_columns(faces.len(), columns)
}

impl QuotientComplex {
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn level(&self) -> SubdivisionLevel {
        self.level
    }

    /// Top dimension of the complex, `p - 1`.
    pub fn dimension(&self) -> usize {
        self.p - 1
    }

    /// Vertex indices of the `i`-th canonical `k`-simplex.
    pub fn simplex(&self, k: usize, i: usize) -> Vec<u32> {
        let mut out = vec![0u32; k + 1];
        self.poset.unpack(self.simplices[k][i], k + 1, &mut out);
        out
    }

    /// The subsets labelling a vertex: one set at level 1, a chain of sets at level 2.
    pub fn vertex_label(&self, vertex: u32) -> &[u32] {
        &self.poset.labels[vertex as usize]
    }

    /// The `i`-th canonical `k`-simplex as a subset chain (level 1 only).
    pub fn subset_chain(&self, k: usize, i: usize) -> Option<SubsetChain> {
        if self.level != SubdivisionLevel::Once {
            return None;
        }
        let sets = self
            .simplex(k, i)
            .into_iter()
            .map(|v| self.poset.labels[v as usize][0])
            .collect();
        SubsetChain::new(self.p + 1, sets).ok()
    }

    /// `∂_k` from `k`-simplices to `(k-1)`-simplices; `k = 0` is the augmentation.
    pub fn boundary(&self, k: usize) -> &SparseMatrix<i64> {
        &self.boundaries[k]
    }

    pub fn boundaries(&self) -> &[SparseMatrix<i64>] {
        &self.boundaries
    }

    /// Checks `∂_k ∘ ∂_{k+1} = 0` in every degree, including the augmentation.
    pub fn check_boundary_squared(&self) -> Result<()> {
        for k in 0..self.boundaries.len().saturating_sub(1) {
            let comp = self.boundaries[k].mul(&self.boundaries[k + 1])?;
            if !comp.is_zero() {
                return Err(Error::NonzeroComposite { degree: k + 1 });
            }
        }
        Ok(())
    }

    /// Reduced integral homology in degrees `0..p`.
    pub fn reduced_homology(&self) -> Result<Vec<HomologyGroup>> {
        homology_of_complex(&self.boundaries)
    }

    pub fn to_export(&self) -> QuotientExport {
        QuotientExport {
            p: self.p,
            level: self.level.as_u8(),
            group_order: self.group.order(),
            counts: orbit_counts(self),
            boundaries: self
                .boundaries
                .iter()
                .map(SparseMatrix::to_triplet_json)
                .collect(),
        }
    }
}

/// Number of simplex orbits in each dimension.
pub fn orbit_counts(complex: &QuotientComplex) -> Vec<usize> {
    complex.simplices.iter().map(Vec::len).collect()
}

/// JSON export of a quotient complex; `boundaries[0]` is the augmentation row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientExport {
    pub p: usize,
    pub level: u8,
    pub group_order: usize,
    pub counts: Vec<usize>,
    pub boundaries: Vec<TripletMatrix>,
}
