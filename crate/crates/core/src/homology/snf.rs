//! Sparse Smith normal form.
//!
//! Elimination runs in two phases. The first repeatedly pivots on entries of
//! absolute value one, taking the shortest live line first and, within it,
//! the index shared by the fewest other lines. Boundary matrices are `±1`
//! valued, so this phase usually consumes almost the whole matrix. The
//! residual, which has no unit entries left, is diagonalized by Euclidean
//! steps on the smallest entry. Invariant factors are then obtained from the
//! diagonal by gcd/lcm normalization.
//!
//! The matrix is processed as a list of lines (its columns); each line is a
//! sorted list of `(index, value)` pairs.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use super::scalar::{quotient, SnfScalar};
use super::sparse::SparseMatrix;

/// Rank and nontrivial invariant factors of an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithSummary {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    /// Invariant factors greater than one, each dividing the next.
    pub factors: Vec<BigUint>,
}

impl SmithSummary {
    /// The Smith diagonal: `rank` nonzero entries then zeros up to `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigUint> {
        let ones = self.rank - self.factors.len();
        let mut d = vec![BigUint::one(); ones];
        d.extend(self.factors.iter().cloned());
        d.resize(self.rows.min(self.cols), BigUint::zero());
        d
    }
}

#[derive(Debug)]
struct Overflow;

/// Computes rank and invariant factors. Fixed-width inputs that overflow
/// during elimination are redone over `BigInt`.
pub fn smith_summary<T: SnfScalar>(m: &SparseMatrix<T>) -> SmithSummary {
    let rows = m.rows();
    let cols = m.cols();
    let (rank, diag) = match Eliminator::new(m.columns().to_vec(), rows).run() {
        Ok(r) => r,
        Err(Overflow) => {
            log::debug!("fixed-width overflow in {rows}x{cols} elimination, retrying over BigInt");
            let lines = m
                .columns()
                .iter()
                .map(|c| c.iter().map(|(r, v)| (*r, v.to_bigint())).collect())
                .collect();
            Eliminator::<BigInt>::new(lines, rows)
                .run()
                .expect("BigInt elimination cannot overflow")
        }
    };
    SmithSummary {
        rows,
        cols,
        rank,
        factors: invariant_factors(diag),
    }
}

/// The diagonal of the Smith normal form of `m`.
pub fn smith_diagonal<T: SnfScalar>(m: &SparseMatrix<T>) -> Vec<BigUint> {
    smith_summary(m).diagonal()
}

/// Normalizes a list of nonzero diagonal entries into a divisibility chain
/// and drops the units.
fn invariant_factors(diag: Vec<BigInt>) -> Vec<BigUint> {
    let mut d: Vec<BigUint> = diag
        .into_iter()
        .map(|x| x.magnitude().clone())
        .filter(|x| !x.is_one())
        .collect();
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            if (&d[j] % &d[i]).is_zero() {
                continue;
            }
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d.retain(|x| !x.is_one());
    d
}

struct Eliminator<T> {
    lines: Vec<Vec<(u32, T)>>,
    /// For each index, the lines that may contain it (stale entries allowed).
    occ: Vec<Vec<u32>>,
    alive: Vec<bool>,
    rank: usize,
    diag: Vec<BigInt>,
}

impl<T: SnfScalar> Eliminator<T> {
    fn new(lines: Vec<Vec<(u32, T)>>, indices: usize) -> Self {
        let mut occ = vec![Vec::new(); indices];
        for (l, line) in lines.iter().enumerate() {
            for (i, _) in line {
                occ[*i as usize].push(l as u32);
            }
        }
        let alive = lines.iter().map(|l| !l.is_empty()).collect();
        Self {
            lines,
            occ,
            alive,
            rank: 0,
            diag: Vec::new(),
        }
    }

    fn run(mut self) -> Result<(usize, Vec<BigInt>), Overflow> {
        self.unit_phase()?;
        let residual = self.alive.iter().filter(|&&a| a).count();
        if residual > 0 {
            log::debug!("unit elimination left {residual} lines; running Euclidean phase");
        }
        self.euclid_phase()?;
        Ok((self.rank, self.diag))
    }

    fn unit_phase(&mut self) -> Result<(), Overflow> {
        let mut heap: BinaryHeap<Reverse<(u32, u32)>> = self
            .lines
            .iter()
            .enumerate()
            .filter(|(_, l)| !l.is_empty())
            .map(|(i, l)| Reverse((l.len() as u32, i as u32)))
            .collect();
        while let Some(Reverse((len, l))) = heap.pop() {
            let l = l as usize;
            if !self.alive[l] || self.lines[l].len() != len as usize {
                continue;
            }
            if len == 0 {
                self.alive[l] = false;
                continue;
            }
            let best = self.lines[l]
                .iter()
                .enumerate()
                .filter(|(_, (_, v))| v.is_unit())
                .min_by_key(|(_, (i, _))| self.occ[*i as usize].len())
                .map(|(k, _)| k);
            if let Some(k) = best {
                self.pivot(l, k, Some(&mut heap))?;
            }
        }
        Ok(())
    }

    /// Eliminates the index of entry `k` of line `l` from every other line
    /// using a unit pivot, then retires line `l`.
    fn pivot(
        &mut self,
        l: usize,
        k: usize,
        mut heap: Option<&mut BinaryHeap<Reverse<(u32, u32)>>>,
    ) -> Result<(), Overflow> {
        let (idx, v) = self.lines[l][k].clone();
        debug_assert!(v.is_unit());
        let pivot_line = std::mem::take(&mut self.lines[l]);
        self.alive[l] = false;
        self.rank += 1;
        let mut users = std::mem::take(&mut self.occ[idx as usize]);
        users.sort_unstable();
        users.dedup();
        for l2 in users {
            let l2 = l2 as usize;
            if l2 == l || !self.alive[l2] {
                continue;
            }
            let Ok(pos) = self.lines[l2].binary_search_by_key(&idx, |e| e.0) else {
                continue;
            };
            // v = ±1, so a / v = ±a
            let a = &self.lines[l2][pos].1;
            let factor = if v.is_positive() {
                a.clone()
            } else {
                T::zero().checked_mul_sub(a, &T::one()).ok_or(Overflow)?
            };
            let new = sub_multiple(&self.lines[l2], &factor, &pivot_line, l2 as u32, &mut self.occ)?;
            self.lines[l2] = new;
            if self.lines[l2].is_empty() {
                self.alive[l2] = false;
            } else if let Some(h) = heap.as_deref_mut() {
                h.push(Reverse((self.lines[l2].len() as u32, l2 as u32)));
            }
        }
        Ok(())
    }

    fn euclid_phase(&mut self) -> Result<(), Overflow> {
        loop {
            let mut best: Option<(T, usize, usize)> = None;
            for (l, line) in self.lines.iter().enumerate() {
                if !self.alive[l] {
                    continue;
                }
                for (k, (_, v)) in line.iter().enumerate() {
                    let a = v.abs();
                    if best.as_ref().is_none_or(|(b, _, _)| a < *b) {
                        best = Some((a, l, k));
                    }
                }
            }
            let Some((abs, l, k)) = best else { break };
            if abs.is_one() {
                self.pivot(l, k, None)?;
                continue;
            }
            let (idx, a) = self.lines[l][k].clone();

            // clear `idx` from the other lines, keeping remainders
            let mut users = std::mem::take(&mut self.occ[idx as usize]);
            users.sort_unstable();
            users.dedup();
            let mut keep = vec![l as u32];
            let mut cleared = true;
            let pivot_line = self.lines[l].clone();
            for l2 in users {
                let l2 = l2 as usize;
                if l2 == l || !self.alive[l2] {
                    continue;
                }
                let Ok(pos) = self.lines[l2].binary_search_by_key(&idx, |e| e.0) else {
                    continue;
                };
                let q = quotient(&self.lines[l2][pos].1, &a);
                if !q.is_zero() {
                    let new = sub_multiple(&self.lines[l2], &q, &pivot_line, l2 as u32, &mut self.occ)?;
                    self.lines[l2] = new;
                }
                if self.lines[l2].binary_search_by_key(&idx, |e| e.0).is_ok() {
                    cleared = false;
                    keep.push(l2 as u32);
                }
                if self.lines[l2].is_empty() {
                    self.alive[l2] = false;
                }
            }
            self.occ[idx as usize] = keep;
            if !cleared {
                continue;
            }

            // `idx` now lives only in line `l`: reduce the rest of the line
            // modulo the pivot (row operations touching this line alone).
            let line = std::mem::take(&mut self.lines[l]);
            let mut reduced = Vec::with_capacity(line.len());
            for (j, b) in line {
                if j == idx {
                    reduced.push((j, b));
                    continue;
                }
                let q = quotient(&b, &a);
                let r = b.checked_mul_sub(&q, &a).ok_or(Overflow)?;
                if !r.is_zero() {
                    reduced.push((j, r));
                }
            }
            if reduced.len() == 1 {
                self.alive[l] = false;
                self.rank += 1;
                self.diag.push(a.to_bigint());
                self.occ[idx as usize].clear();
            } else {
                self.lines[l] = reduced;
            }
        }
        Ok(())
    }
}

/// `a - factor * b` for sorted sparse lines; registers line `owner` in `occ`
/// for indices that appear in the result but not in `a`.
fn sub_multiple<T: SnfScalar>(
    a: &[(u32, T)],
    factor: &T,
    b: &[(u32, T)],
    owner: u32,
    occ: &mut [Vec<u32>],
) -> Result<Vec<(u32, T)>, Overflow> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let zero = T::zero();
    while i < a.len() || j < b.len() {
        let ai = a.get(i).map(|e| e.0).unwrap_or(u32::MAX);
        let bj = b.get(j).map(|e| e.0).unwrap_or(u32::MAX);
        if ai < bj {
            out.push(a[i].clone());
            i += 1;
        } else if bj < ai {
            let v = zero.checked_mul_sub(factor, &b[j].1).ok_or(Overflow)?;
            if !v.is_zero() {
                occ[bj as usize].push(owner);
                out.push((bj, v));
            }
            j += 1;
        } else {
            let v = a[i].1.checked_mul_sub(factor, &b[j].1).ok_or(Overflow)?;
            if !v.is_zero() {
                out.push((ai, v));
            }
            i += 1;
            j += 1;
        }
    }
    Ok(out)
}
