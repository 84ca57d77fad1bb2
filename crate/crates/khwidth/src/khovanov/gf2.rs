//! Sparse linear algebra over the two-element field.

use std::collections::HashMap;

/// A row stored as the sorted list of its nonzero column indices.
pub type SparseRow = Vec<u32>;

/// Symmetric difference of two sorted rows.
pub fn xor_rows(a: &[u32], b: &[u32]) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Incremental row echelon form keyed by leading column.
#[derive(Default)]
pub struct Echelon {
    pivots: HashMap<u32, SparseRow>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Reduces `row` against the stored pivots; returns true if it was independent.
    pub fn insert(&mut self, mut row: SparseRow) -> bool {
        while let Some(&lead) = row.first() {
            match self.pivots.get(&lead) {
                Some(p) => row = xor_rows(&row, p),
                None => {
                    self.pivots.insert(lead, row);
                    return true;
                }
            }
        }
        false
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Rank of a matrix given by sparse rows (each sorted, without repeats).
pub fn rank(rows: impl IntoIterator<Item = SparseRow>) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Normalizes an unsorted column list with repeats into a row over F2.
pub fn normalize(mut cols: Vec<u32>) -> SparseRow {
    cols.sort_unstable();
    let mut out: SparseRow = Vec::with_capacity(cols.len());
    for c in cols {
        if out.last() == Some(&c) {
            out.pop();
        } else {
            out.push(c);
        }
    }
    out
}
