use serde::{Deserialize, Serialize};


use super::scalar::SnfScalar;
use crate::error::{Error, Result};

/// Column-major sparse integer matrix with no stored zeros.
///
/// Each column is a list of `(row, value)` pairs sorted by row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix<T> {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(u32, T)>>,
}

impl<T: SnfScalar> SparseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    /// Builds a matrix from `(row, col, value)` triplets. Repeated positions
    /// are summed and zero sums dropped.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, T)>,
    ) -> Result<Self> {
        let mut columns: Vec<Vec<(u32, T)>> = vec![Vec::new(); cols];
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::Shape(format!(
                    "entry ({r}, {c}) outside a {rows}x{cols} matrix"
                )));
            }
            columns[c].push((r as u32, v));
        }
        for col in &mut columns {
            *col = normalize_column(std::mem::take(col));
        }
        Ok(Self { rows, cols, columns })
    }

    /// Builds a matrix from dense row-major data.
    pub fn from_dense(data: &[Vec<T>]) -> Result<Self> {
        let rows = data.len();
        let cols = data.first().map_or(0, Vec::len);
        if data.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged dense matrix".into()));
        }
        let triplets = data.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(move |(j, v)| (i, j, v.clone()))
        });
        Self::from_triplets(rows, cols, triplets)
    }

    /// Takes ownership of prepared columns; each is sorted and merged here.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(u32, T)>>) -> Result<Self> {
        let cols = columns.len();
        let columns: Vec<_> = columns.into_iter().map(normalize_column).collect();
        if columns
            .iter()
            .any(|c| c.last().is_some_and(|&(r, _)| r as usize >= rows))
        {
            return Err(Error::Shape(format!("row index out of range for {rows} rows")));
        }
        Ok(Self { rows, cols, columns })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn column(&self, c: usize) -> &[(u32, T)] {
        &self.columns[c]
    }

    pub fn columns(&self) -> &[Vec<(u32, T)>] {
        &self.columns
    }

    pub fn into_columns(self) -> Vec<Vec<(u32, T)>> {
        self.columns
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        match self.columns[c].binary_search_by_key(&(r as u32), |e| e.0) {
            Ok(k) => self.columns[c][k].1.clone(),
            Err(_) => T::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        self.columns.iter().enumerate().flat_map(|(c, col)| {
            col.iter().map(move |(r, v)| (*r as usize, c, v.clone()))
        })
    }

    pub fn transpose(&self) -> Self {
        let t = self.triplets().map(|(r, c, v)| (c, r, v));
        Self::from_triplets(self.cols, self.rows, t).expect("transpose stays in range")
    }

    /// Permutes rows and columns: entry `(r, c)` moves to `(row_perm[r], col_perm[c])`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        let t = self
            .triplets()
            .map(|(r, c, v)| (row_perm[r], col_perm[c], v));
        Self::from_triplets(self.rows, self.cols, t).expect("permutation stays in range")
    }

    /// Product `self * other`, accumulated over `BigInt`.
    pub fn mul(&self, other: &Self) -> Result<SparseMatrix<num_bigint::BigInt>> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut columns = Vec::with_capacity(other.cols);
        for col in &other.columns {
            let mut acc: Vec<(u32, num_bigint::BigInt)> = Vec::new();
            for (k, b) in col {
                let b = b.to_bigint();
                for (r, a) in &self.columns[*k as usize] {
                    acc.push((*r, a.to_bigint() * &b));
                }
            }
            columns.push(acc);
        }
        SparseMatrix::from_columns(self.rows, columns)
    }

    pub fn map<U: SnfScalar>(&self, f: impl Fn(&T) -> U) -> SparseMatrix<U> {
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            columns: self
                .columns
                .iter()
                .map(|c| c.iter().map(|(r, v)| (*r, f(v))).collect())
                .collect(),
        }
    }

    pub fn to_triplet_json(&self) -> TripletMatrix {
        TripletMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .triplets()
                .map(|(r, c, v)| (r, c, v.to_string()))
                .collect(),
        }
    }
}

fn normalize_column<T: SnfScalar>(mut col: Vec<(u32, T)>) -> Vec<(u32, T)> {
    col.sort_by_key(|e| e.0);
    let mut out: Vec<(u32, T)> = Vec::with_capacity(col.len());
    for (r, v) in col {
        match out.last_mut() {
            Some((lr, lv)) if *lr == r => *lv = lv.clone() + v,
            _ => out.push((r, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

/// Triplet interchange format: `{"rows": r, "cols": c, "entries": [[i, j, "v"], ...]}`.
///
/// Values are decimal strings so that entries of any size survive the trip.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripletMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, String)>,
}

impl TripletMatrix {
    pub fn to_matrix(&self) -> Result<SparseMatrix<num_bigint::BigInt>> {
        let entries = self
            .entries
            .iter()
            .map(|(r, c, v)| {
                v.parse::<num_bigint::BigInt>()
                    .map(|v| (*r, *c, v))
                    .map_err(|_| Error::Parse(format!("bad matrix entry {v:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        SparseMatrix::from_triplets(self.rows, self.cols, entries)
    }
}
