//! The relative cellular spectral sequence of `Δ_{g,n}` against its bm
//! subcomplex, and the order-counting inference that certifies torsion and
//! vanishing without computing any differential.
//!
//! Cell `σ` of dimension `p` with symmetry group `G` contributes
//! `H̃_{p+q-1}(S^{p-1}/G)` to `E₁^{p,q}`; the column `p = 0` is the homology of
//! the (contractible) subcomplex, i.e. a single `ℤ` at `(0,0)`. Differentials
//! `d_r` go `(p,q) → (p-r, q+r-1)` and the page converges to `H_{p+q}`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology::{reduced_sphere_quotient_homology, HomologyGroup, SphereQuotientOptions};
use crate::permgroup::{PermGroup, DEFAULT_GROUP_CAP};
use crate::stablegraphs::{check_stable_type, edge_group_with_cap, enumerate, enumerate_with_max_edges, in_bm, GraphFile, StableGraph};

/// A cell of `Δ_{g,n}` outside the bm subcomplex.
#[derive(Clone, Debug)]
pub struct RelativeCell {
    pub graph: StableGraph,
    /// Cell dimension, one less than the number of edges.
    pub p: usize,
    pub edge_group: PermGroup,
}

#[derive(Clone, Copy, Debug)]
pub struct DeltaOptions {
    pub sphere: SphereQuotientOptions,
    pub group_cap: usize,
}

impl Default for DeltaOptions {
    fn default() -> Self {
        Self {
            sphere: SphereQuotientOptions::default(),
            group_cap: DEFAULT_GROUP_CAP,
        }
    }
}

/// Stable graphs of type `(g, n)` not in bm, with their edge groups.
pub fn relative_cells(g: u32, n: u32) -> Result<Vec<RelativeCell>> {
    relative_cells_with_cap(g, n, DEFAULT_GROUP_CAP)
}

pub fn relative_cells_with_cap(g: u32, n: u32, cap: usize) -> Result<Vec<RelativeCell>> {
    enumerate(g, n)?
        .into_iter()
        .filter(|graph| !in_bm(graph))
        .map(|graph| {
            let edge_group = edge_group_with_cap(&graph, cap)?;
            Ok(RelativeCell {
                p: graph.cell_dimension(),
                graph,
                edge_group,
            })
        })
        .collect()
}

/// True iff every stable graph with at most two edges lies in bm, i.e. the
/// 1-skeleton of `Δ_{g,n}` is inside the subcomplex.
pub fn check_one_skeleton(g: u32, n: u32) -> Result<bool> {
    Ok(enumerate_with_max_edges(g, n, 2)?.iter().all(in_bm))
}

/// One position of the `E₁` page.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct E1Entry {
    pub p: usize,
    pub q: i64,
    pub groups: Vec<HomologyGroup>,
    /// Index into the relative cell list for each group; empty for the base entry.
    pub cells: Vec<usize>,
}

impl E1Entry {
    pub fn degree(&self) -> i64 {
        self.p as i64 + self.q
    }

    fn rank(&self) -> usize {
        self.groups.iter().map(|g| g.rank).sum()
    }

    fn is_finite(&self) -> bool {
        self.rank() == 0
    }

    /// Exponent of `ℓ` in the order of the (finite part of the) entry.
    fn valuation(&self, ell: u64) -> u32 {
        self.groups
            .iter()
            .flat_map(|g| &g.invariant_factors)
            .map(|d| valuation(d, ell))
            .sum()
    }

    fn label(&self) -> String {
        format!("E1^{{{},{}}}", self.p, self.q)
    }
}

/// Nonzero entries of `E₁`, sorted by `(p, q)`, base entry first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct E1Page {
    /// Dimension of `Δ_{g,n}`; reduced homology is reported in degrees `0..=dimension`.
    pub dimension: usize,
    pub entries: Vec<E1Entry>,
}

impl E1Page {
    pub fn get(&self, p: usize, q: i64) -> Option<&E1Entry> {
        self.entries.iter().find(|e| e.p == p && e.q == q)
    }
}

/// Assembles `E₁` from the relative cells.
///
/// Refuses `g = 0` (the subcomplex is only known to be contractible for
/// `g ≥ 1`) and aborts if some cell of dimension at most one lies outside it.
pub fn e1_page(g: u32, n: u32, cells: &[RelativeCell], options: DeltaOptions) -> Result<E1Page> {
    check_stable_type(g, n)?;
    if g == 0 {
        return Err(Error::RelativeModeRefused { g });
    }
    if !check_one_skeleton(g, n)? || cells.iter().any(|c| c.p <= 1) {
        return Err(Error::SkeletonOutsideSubcomplex);
    }
    let homology: Vec<Vec<HomologyGroup>> = cells
        .par_iter()
        .enumerate()
        .map(|(i, cell)| {
            log::info!(
                "cell {i}: p = {}, |G| = {}, {} vertices",
                cell.p,
                cell.edge_group.order(),
                cell.graph.num_vertices()
            );
            let h = reduced_sphere_quotient_homology(cell.p, &cell.edge_group, options.sphere)?;
            log::info!("cell {i} done");
            Ok(h)
        })
        .collect::<Result<_>>()?;

    let mut map: BTreeMap<(usize, i64), E1Entry> = BTreeMap::new();
    map.insert(
        (0, 0),
        E1Entry {
            p: 0,
            q: 0,
            groups: vec![HomologyGroup::free(1)],
            cells: Vec::new(),
        },
    );
    for (i, (cell, h)) in cells.iter().zip(&homology).enumerate() {
        for (k, group) in h.iter().enumerate() {
            if group.is_zero() {
                continue;
            }
            let q = k as i64 + 1 - cell.p as i64;
            let entry = map.entry((cell.p, q)).or_insert_with(|| E1Entry {
                p: cell.p,
                q,
                groups: Vec::new(),
                cells: Vec::new(),
            });
            entry.groups.push(group.clone());
            entry.cells.push(i);
        }
    }
    Ok(E1Page {
        dimension: (3 * g as i64 - 4 + n as i64) as usize,
        entries: map.into_values().collect(),
    })
}

/// A lower bound `ℓ^exponent` on the `ℓ`-part of `H̃_degree`, with the steps
/// that justify it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub degree: usize,
    pub prime: u64,
    pub exponent: u32,
    pub steps: Vec<String>,
}

/// What the order argument guarantees about `H̃_*(Δ_{g,n})`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionReport {
    /// Degree → primes whose torsion is guaranteed to be present.
    pub torsion: BTreeMap<usize, Vec<u64>>,
    /// Degrees with `H̃ = 0`.
    pub zero: Vec<usize>,
    /// Degrees where nothing is certified.
    pub undetermined: Vec<usize>,
    /// Degrees where `H̃` is determined exactly.
    pub exact: BTreeMap<usize, HomologyGroup>,
    /// Degree → a positive lower bound on the free rank.
    pub free_rank_at_least: BTreeMap<usize, usize>,
    pub certificates: Vec<Certificate>,
}

/// Positions reachable from `e` by some `d_r` (targets) or mapping into it
/// (sources), restricted to the nonzero, non-base entries.
fn neighbours<'a>(page: &'a E1Page, e: &E1Entry) -> Vec<(&'a E1Entry, &'static str, usize)> {
    let mut out = Vec::new();
    for other in page.entries.iter().filter(|o| o.p > 0) {
        if other.degree() == e.degree() - 1 && other.p < e.p {
            out.push((other, "target", e.p - other.p));
        } else if other.degree() == e.degree() + 1 && other.p > e.p {
            out.push((other, "source", other.p - e.p));
        }
    }
    out
}

/// Runs the order-counting argument over the page.
///
/// The base entry `(0,0) = ℤ` is `H₀` of the subcomplex, which maps
/// isomorphically onto `H₀(Δ_{g,n})`: nothing leaves column 0 and nothing
/// can hit it, so it is dropped and the remaining page computes reduced
/// homology.
pub fn infer(page: &E1Page) -> TorsionReport {
    let mut report = TorsionReport::default();
    let cells: Vec<&E1Entry> = page.entries.iter().filter(|e| e.p > 0).collect();
    for k in 0..=page.dimension {
        let diagonal: Vec<&E1Entry> = cells.iter().copied().filter(|e| e.degree() == k as i64).collect();
        if diagonal.is_empty() {
            report.zero.push(k);
            continue;
        }
        let mut certified = false;

        if let [only] = diagonal[..] {
            if neighbours(page, only).is_empty() {
                let mut groups = only.groups.iter();
                let first = groups.next().cloned().unwrap_or_default();
                let sum = groups.fold(first, |acc, g| direct_sum(&acc, g));
                report.exact.insert(k, sum);
                certified = true;
            }
        }

        let free: i64 = diagonal
            .iter()
            .map(|e| {
                let lost: usize = neighbours(page, e).iter().map(|(n, _, _)| n.rank()).sum();
                e.rank() as i64 - lost as i64
            })
            .filter(|&r| r > 0)
            .sum();
        if free > 0 {
            report.free_rank_at_least.insert(k, free as usize);
            certified = true;
        }

        // torsion needs every graded piece to be finite, or a free piece could
        // absorb the torsion of a subquotient
        if diagonal.iter().all(|e| e.is_finite()) {
            let mut primes: Vec<u64> = diagonal.iter().flat_map(|e| entry_primes(e)).collect();
            primes.sort_unstable();
            primes.dedup();
            for ell in primes {
                let mut steps = Vec::new();
                let mut total = 0u32;
                for e in diagonal.iter().filter(|e| e.valuation(ell) > 0) {
                    let (exp, mut s) = position_bound(page, e, ell);
                    steps.append(&mut s);
                    total += exp;
                }
                if total > 0 {
                    steps.push(format!(
                        "|H̃_{k}|_{ell} = Π_{{p+q={k}}} |E∞^{{p,q}}|_{ell} ≥ {ell}^{total}"
                    ));
                    report.torsion.entry(k).or_default().push(ell);
                    report.certificates.push(Certificate {
                        degree: k,
                        prime: ell,
                        exponent: total,
                        steps,
                    });
                    certified = true;
                }
            }
        }

        if !certified {
            report.undetermined.push(k);
        }
    }
    report
}

/// `ℓ`-exponent lower bound for `E∞` at one position, with its derivation.
fn position_bound(page: &E1Page, e: &E1Entry, ell: u64) -> (u32, Vec<String>) {
    let start = e.valuation(ell);
    let mut steps = vec![format!("|{}|_{ell} = {ell}^{start}", e.label())];
    let mut exponent = start as i64;
    for (n, role, r) in neighbours(page, e) {
        if !n.is_finite() {
            steps.push(format!("{} is infinite ({role} of d_{r}): no bound", n.label()));
            return (0, steps);
        }
        let v = n.valuation(ell);
        if v > 0 {
            exponent -= v as i64;
            steps.push(format!("÷ |{}|_{ell} = {ell}^{v} ({role} of d_{r})", n.label()));
        }
    }
    let exponent = exponent.max(0) as u32;
    steps.push(format!("|E∞^{{{},{}}}|_{ell} ≥ {ell}^{exponent}", e.p, e.q));
    (exponent, steps)
}

fn direct_sum(a: &HomologyGroup, b: &HomologyGroup) -> HomologyGroup {
    // elementary divisors of both, regrouped into invariant factors
    let mut powers: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for d in a.invariant_factors.iter().chain(&b.invariant_factors) {
        for (ell, e) in factorize(d) {
            powers.entry(ell).or_default().push(e);
        }
    }
    let len = powers.values().map(Vec::len).max().unwrap_or(0);
    let mut factors = vec![BigUint::one(); len];
    for (ell, mut exps) in powers {
        exps.sort_unstable();
        let offset = len - exps.len();
        for (i, e) in exps.into_iter().enumerate() {
            factors[offset + i] *= BigUint::from(ell).pow(e);
        }
    }
    HomologyGroup::new(a.rank + b.rank, factors)
}

fn entry_primes(e: &E1Entry) -> Vec<u64> {
    e.groups
        .iter()
        .flat_map(|g| &g.invariant_factors)
        .flat_map(|d| factorize(d).into_iter().map(|(ell, _)| ell))
        .collect()
}

fn valuation(d: &BigUint, ell: u64) -> u32 {
    let ell = BigUint::from(ell);
    let mut d = d.clone();
    let mut e = 0;
    while !d.is_zero() && (&d % &ell).is_zero() {
        d /= &ell;
        e += 1;
    }
    e
}

/// Prime factorization by trial division. Invariant factors here are tiny;
/// anything beyond `u64` is reported as a single (possibly composite) factor.
fn factorize(d: &BigUint) -> Vec<(u64, u32)> {
    let Some(mut x) = d.to_u64() else {
        log::warn!("not factoring invariant factor {d}");
        return Vec::new();
    };
    let mut out = Vec::new();
    let mut ell = 2u64;
    while ell.saturating_mul(ell) <= x {
        let mut e = 0;
        while x % ell == 0 {
            x /= ell;
            e += 1;
        }
        if e > 0 {
            out.push((ell, e));
        }
        ell += 1;
    }
    if x > 1 {
        out.push((x, 1));
    }
    out
}

/// One cell of the relative list, as reported.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellSummary {
    pub id: usize,
    pub p: usize,
    pub group_order: usize,
    pub generators: Vec<String>,
    pub graph: GraphFile,
}

impl CellSummary {
    pub fn of(id: usize, cell: &RelativeCell) -> Self {
        Self {
            id,
            p: cell.p,
            group_order: cell.edge_group.order(),
            generators: cell.edge_group.generators().iter().map(|g| g.to_string()).collect(),
            graph: cell.graph.to_file(),
        }
    }
}

/// Everything the pipeline computes for one `(g, n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaReport {
    pub g: u32,
    pub n: u32,
    pub relative_cells: Vec<CellSummary>,
    pub e1: Vec<E1Entry>,
    pub certified: TorsionReport,
}

/// Relative cells, `E₁` page and inference for `Δ_{g,n}`.
pub fn delta(g: u32, n: u32, options: DeltaOptions) -> Result<DeltaReport> {
    check_stable_type(g, n)?;
    if g == 0 {
        return Err(Error::RelativeModeRefused { g });
    }
    let cells = relative_cells_with_cap(g, n, options.group_cap)?;
    let page = e1_page(g, n, &cells, options)?;
    let certified = infer(&page);
    Ok(DeltaReport {
        g,
        n,
        relative_cells: cells.iter().enumerate().map(|(i, c)| CellSummary::of(i, c)).collect(),
        e1: page.entries,
        certified,
    })
}
