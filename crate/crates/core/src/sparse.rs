//! Row-compressed sparse matrix.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SparseError {
    #[error("row {row}: column {col} out of range for width {n_cols}")]
    ColumnOutOfRange {
        row: usize,
        col: usize,
        n_cols: usize,
    },
    #[error("row {row}: columns must be strictly increasing")]
    UnsortedColumns { row: usize },
}

/// CSR storage: row `i` owns `indices[indptr[i]..indptr[i + 1]]` and the
/// matching `values`. Columns are strictly increasing within a row and no
/// zeros are stored.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseMatrix {
    n_cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    pub fn new(n_cols: usize) -> Self {
        Self {
            n_cols,
            indptr: vec![0],
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Append a row given as `(col, value)` pairs in increasing column order.
    /// Zero values are dropped.
    pub fn push_row<I>(&mut self, entries: I) -> Result<(), SparseError>
    where
        I: IntoIterator<Item = (usize, f64)>,
    {
        let row = self.n_rows();
        let start = self.indices.len();
        let mut last: Option<usize> = None;
        for (col, value) in entries {
            let bad = if col >= self.n_cols {
                Some(SparseError::ColumnOutOfRange {
                    row,
                    col,
                    n_cols: self.n_cols,
                })
            } else if last.is_some_and(|l| col <= l) {
                Some(SparseError::UnsortedColumns { row })
            } else {
                None
            };
            if let Some(err) = bad {
                self.indices.truncate(start);
                self.values.truncate(start);
                return Err(err);
            }
            last = Some(col);
            if value != 0.0 {
                self.indices.push(col);
                self.values.push(value);
            }
        }
        self.indptr.push(self.indices.len());
        Ok(())
    }

    pub fn from_dense(rows: &[Vec<f64>], n_cols: usize) -> Result<Self, SparseError> {
        let mut m = Self::new(n_cols);
        for r in rows {
            m.push_row(r.iter().copied().enumerate())?;
        }
        Ok(m)
    }

    pub fn n_rows(&self) -> usize {
        self.indptr.len() - 1
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let (a, b) = (self.indptr[i], self.indptr[i + 1]);
        (&self.indices[a..b], &self.values[a..b])
    }

    pub fn row_entries(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (cols, vals) = self.row(i);
        cols.iter().copied().zip(vals.iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        cols.binary_search(&j).map_or(0.0, |k| vals[k])
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n_rows())
            .map(|i| {
                let mut row = vec![0.0; self.n_cols];
                for (j, v) in self.row_entries(i) {
                    row[j] = v;
                }
                row
            })
            .collect()
    }

    /// Dense column-major copy, `out[col][row]`.
    pub fn to_dense_columns(&self) -> Vec<Vec<f64>> {
        let mut cols = vec![vec![0.0; self.n_rows()]; self.n_cols];
        for (i, span) in self.indptr.windows(2).enumerate() {
            for k in span[0]..span[1] {
                cols[self.indices[k]][i] = self.values[k];
            }
        }
        cols
    }

    /// Keep only the listed rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut m = Self::new(self.n_cols);
        for &r in rows {
            let (cols, vals) = self.row(r);
            m.indices.extend_from_slice(cols);
            m.values.extend_from_slice(vals);
            m.indptr.push(m.indices.len());
        }
        m
    }
}
