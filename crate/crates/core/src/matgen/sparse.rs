//! Coordinate-form integer sparse matrices.
//!
//! Indices are 1-based everywhere in the public surface. Entries are kept
//! sorted by `(row, col)` with a row-offset table so a row is a contiguous
//! slice.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// A single nonzero entry, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Entry {
    pub row: usize,
    pub col: usize,
    pub value: i64,
}

#[derive(Clone, PartialEq, Eq)]
pub struct SparseIntMatrix {
    dim: usize,
    entries: Vec<Entry>,
    // row_start[i] is the offset of the first entry of row i + 1.
    row_start: Vec<usize>,
}

impl SparseIntMatrix {
    /// Builds a matrix from arbitrary-order entries. Rejects zeros, duplicates
    /// and out-of-range indices.
    pub fn from_entries<I>(dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = Entry>,
    {
        if dim == 0 {
            return Err(Error::Domain("matrix dimension must be positive".into()));
        }
        let mut entries: Vec<Entry> = entries.into_iter().collect();
        entries.sort_unstable();
        for (k, e) in entries.iter().enumerate() {
            if e.row == 0 || e.col == 0 || e.row > dim || e.col > dim {
                return Err(Error::Domain(format!(
                    "entry ({}, {}) outside 1..={dim}",
                    e.row, e.col
                )));
            }
            if e.value == 0 {
                return Err(Error::Domain(format!("explicit zero at ({}, {})", e.row, e.col)));
            }
            if k > 0 && entries[k - 1].row == e.row && entries[k - 1].col == e.col {
                return Err(Error::Domain(format!("duplicate entry ({}, {})", e.row, e.col)));
            }
        }
        Ok(Self::from_sorted(dim, entries))
    }

    /// Caller guarantees sorted, unique, nonzero, in-range entries.
    pub(crate) fn from_sorted(dim: usize, entries: Vec<Entry>) -> Self {
        debug_assert!(entries.windows(2).all(|w| (w[0].row, w[0].col) < (w[1].row, w[1].col)));
        debug_assert!(entries.iter().all(|e| e.value != 0));
        let mut row_start = vec![0usize; dim + 1];
        for e in &entries {
            row_start[e.row] += 1;
        }
        for i in 0..dim {
            row_start[i + 1] += row_start[i];
        }
        Self {
            dim,
            entries,
            row_start,
        }
    }

    pub(crate) fn from_triples(dim: usize, triples: impl IntoIterator<Item = (usize, usize, i64)>) -> Self {
        let mut entries: Vec<Entry> = triples
            .into_iter()
            .filter(|&(_, _, v)| v != 0)
            .map(|(row, col, value)| Entry { row, col, value })
            .collect();
        entries.sort_unstable();
        Self::from_sorted(dim, entries)
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_sorted(
            dim,
            (1..=dim)
                .map(|i| Entry {
                    row: i,
                    col: i,
                    value: 1,
                })
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    /// Entries of row `i` (1-based), sorted by column.
    pub fn row(&self, i: usize) -> &[Entry] {
        &self.entries[self.row_start[i - 1]..self.row_start[i]]
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        let row = self.row(i);
        match row.binary_search_by_key(&j, |e| e.col) {
            Ok(k) => row[k].value,
            Err(_) => 0,
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_triples(self.dim, self.entries.iter().map(|e| (e.col, e.row, e.value)))
    }

    /// Exact product; fails on `i64` overflow.
    pub fn mul(&self, rhs: &SparseIntMatrix) -> Result<SparseIntMatrix> {
        if self.dim != rhs.dim {
            return Err(Error::Domain(format!(
                "dimension mismatch {} vs {}",
                self.dim, rhs.dim
            )));
        }
        let mut out = Vec::new();
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for i in 1..=self.dim {
            acc.clear();
            for a in self.row(i) {
                for b in rhs.row(a.col) {
                    let term = a.value.checked_mul(b.value).ok_or(Error::Overflow)?;
                    let slot = acc.entry(b.col).or_insert(0);
                    *slot = slot.checked_add(term).ok_or(Error::Overflow)?;
                }
            }
            out.extend(
                acc.iter()
                    .filter(|(_, &v)| v != 0)
                    .map(|(&col, &value)| Entry { row: i, col, value }),
            );
        }
        Ok(Self::from_sorted(self.dim, out))
    }

    /// `y = A x` for 0-based dense slices.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        for i in 0..self.dim {
            y[i] = self
                .row(i + 1)
                .iter()
                .map(|e| e.value as f64 * x[e.col - 1])
                .sum();
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.entries.iter().all(|e| self.get(e.col, e.row) == e.value)
    }

    pub fn trace(&self) -> i64 {
        (1..=self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> i64 {
        let mut sums = vec![0i64; self.dim];
        for e in &self.entries {
            sums[e.col - 1] += e.value.abs();
        }
        sums.into_iter().max().unwrap_or(0)
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> i64 {
        (1..=self.dim)
            .map(|i| self.row(i).iter().map(|e| e.value.abs()).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for e in &self.entries {
            m[(e.row - 1, e.col - 1)] = e.value as f64;
        }
        m
    }

    pub fn to_dense_i64(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0i64; self.dim]; self.dim];
        for e in &self.entries {
            m[e.row - 1][e.col - 1] = e.value;
        }
        m
    }

    /// Places `block` with its (1,1) entry at (`row_off + 1`, `col_off + 1`).
    pub(crate) fn shifted(&self, row_off: usize, col_off: usize) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.entries
            .iter()
            .map(move |e| (e.row + row_off, e.col + col_off, e.value))
    }
}

impl fmt::Debug for SparseIntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dim <= 16 {
            writeln!(f, "SparseIntMatrix({}x{})", self.dim, self.dim)?;
            for row in self.to_dense_i64() {
                let cells: Vec<String> = row.iter().map(|v| format!("{v:>2}")).collect();
                writeln!(f, "  [{}]", cells.join(" "))?;
            }
            Ok(())
        } else {
            write!(f, "SparseIntMatrix({}x{}, nnz = {})", self.dim, self.dim, self.nnz())
        }
    }
}
