//! Sparse feature vectors and row-major sparse matrices.

use serde::{Deserialize, Serialize};

/// Sparse vector: (column, weight) pairs with strictly increasing columns
/// and no explicit zeros.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SparseVector {
    entries: Vec<(usize, f64)>,
}

impl SparseVector {
    pub fn new() -> Self {
        Self {
            entries: Vec::new(),
        }
    }

    /// Build from unordered pairs; sorts by column and drops zero weights.
    pub fn from_pairs(mut pairs: Vec<(usize, f64)>) -> Self {
        pairs.retain(|(_, w)| *w != 0.0);
        pairs.sort_unstable_by_key(|(c, _)| *c);
        debug_assert!(
            pairs.windows(2).all(|w| w[0].0 < w[1].0),
            "duplicate column"
        );
        Self { entries: pairs }
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Value at `column`; absent entries read as 0.
    pub fn get(&self, column: usize) -> f64 {
        match self.entries.binary_search_by_key(&column, |(c, _)| *c) {
            Ok(i) => self.entries[i].1,
            Err(_) => 0.0,
        }
    }

    pub fn dot(&self, other: &SparseVector) -> f64 {
        let mut sum = 0.0;
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() && j < other.entries.len() {
            let (ca, va) = self.entries[i];
            let (cb, vb) = other.entries[j];
            match ca.cmp(&cb) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    sum += va * vb;
                    i += 1;
                    j += 1;
                }
            }
        }
        sum
    }

    pub fn l2_norm(&self) -> f64 {
        self.entries.iter().map(|(_, w)| w * w).sum::<f64>().sqrt()
    }

    /// Scale to unit L2 norm; the zero vector stays zero.
    pub fn normalized(&self) -> SparseVector {
        let norm = self.l2_norm();
        if norm == 0.0 {
            return self.clone();
        }
        SparseVector {
            entries: self.entries.iter().map(|(c, w)| (*c, w / norm)).collect(),
        }
    }

    /// Squared Euclidean distance, walking the union of both entry sets.
    pub fn squared_distance(&self, other: &SparseVector) -> f64 {
        let mut sum = 0.0;
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() || j < other.entries.len() {
            let ca = self.entries.get(i).map(|(c, _)| *c);
            let cb = other.entries.get(j).map(|(c, _)| *c);
            let d = match (ca, cb) {
                (Some(a), Some(b)) if a == b => {
                    let d = self.entries[i].1 - other.entries[j].1;
                    i += 1;
                    j += 1;
                    d
                }
                (Some(a), Some(b)) if a < b => {
                    let d = self.entries[i].1;
                    i += 1;
                    d
                }
                (Some(_), Some(_)) | (None, Some(_)) => {
                    let d = other.entries[j].1;
                    j += 1;
                    d
                }
                (Some(_), None) => {
                    let d = self.entries[i].1;
                    i += 1;
                    d
                }
                (None, None) => unreachable!(),
            };
            sum += d * d;
        }
        sum
    }
}

/// Row-major sparse matrix with a fixed column count.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct SparseMatrix {
    rows: Vec<SparseVector>,
    n_cols: usize,
}

impl SparseMatrix {
    pub fn new(rows: Vec<SparseVector>, n_cols: usize) -> Self {
        debug_assert!(rows
            .iter()
            .all(|r| r.entries().last().is_none_or(|(c, _)| *c < n_cols)));
        Self { rows, n_cols }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn row(&self, i: usize) -> &SparseVector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[SparseVector] {
        &self.rows
    }

    pub fn value(&self, row: usize, column: usize) -> f64 {
        self.rows[row].get(column)
    }
}

/// Column view of a sparse matrix: per column, (value, row) pairs sorted by
/// value. Rows absent from a column hold an implicit zero there.
#[derive(Debug)]
pub struct ColumnStore {
    columns: Vec<Vec<(f64, u32)>>,
}

impl ColumnStore {
    pub fn build(matrix: &SparseMatrix) -> Self {
        let mut columns = vec![Vec::new(); matrix.n_cols()];
        for (row, vector) in matrix.rows().iter().enumerate() {
            for &(col, value) in vector.entries() {
                columns[col].push((value, row as u32));
            }
        }
        for col in &mut columns {
            col.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        }
        Self { columns }
    }

    /// Nonzero entries of `column`, ascending by value.
    pub fn column(&self, column: usize) -> &[(f64, u32)] {
        &self.columns[column]
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }
}
