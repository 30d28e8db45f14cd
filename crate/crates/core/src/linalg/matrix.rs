use crate::error::{PursuitError, Result};
use crate::scalar::Scalar;

use super::SupportSet;

/// Dense real matrix stored row-major, with a column-major mirror so that
/// both `Aᵗr` sweeps and atom (column) access stay contiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
    by_column: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    /// Wraps `data` (row-major, `rows * cols` finite entries).
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(PursuitError::InvalidArgument(format!(
                "matrix must be at least 1x1, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(PursuitError::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(p) = data.iter().position(|x| !x.is_finite()) {
            return Err(PursuitError::InvalidArgument(format!(
                "matrix entry ({}, {}) is not finite",
                p / cols,
                p % cols
            )));
        }
        let mut by_column = vec![T::zero(); rows * cols];
        for i in 0..rows {
            for j in 0..cols {
                by_column[j * rows + i] = data[i * cols + j];
            }
        }
        Ok(Self { rows, cols, data, by_column })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(PursuitError::DimensionMismatch("ragged rows".into()));
        }
        Self::new(r, c, rows.concat())
    }

    /// Builds a matrix from its columns (each of equal length).
    pub fn from_columns(columns: &[Vec<T>]) -> Result<Self> {
        let c = columns.len();
        let r = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|col| col.len() != r) {
            return Err(PursuitError::DimensionMismatch("ragged columns".into()));
        }
        let mut data = vec![T::zero(); r * c];
        for (j, col) in columns.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                data[i * c + j] = v;
            }
        }
        Self::new(r, c, data)
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![T::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = T::one();
        }
        Self::new(n, n, data).expect("identity is well formed")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.cols + j]
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Atom `j` as a contiguous slice of length `rows`.
    #[inline]
    pub fn column(&self, j: usize) -> &[T] {
        &self.by_column[j * self.rows..(j + 1) * self.rows]
    }

    /// Columns indexed by `support`, packed column-major (`rows x |support|`).
    pub fn gather_columns(&self, support: &SupportSet) -> Vec<T> {
        let mut out = Vec::with_capacity(self.rows * support.len());
        for &j in support {
            out.extend_from_slice(self.column(j));
        }
        out
    }

    /// `Aᵗr` without dimension checks.
    pub(crate) fn transpose_mul(&self, r: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.cols];
        for (i, &ri) in r.iter().enumerate() {
            if ri == T::zero() {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o += a * ri;
            }
        }
        out
    }

    /// `Ax` for a full-length `x`.
    pub fn mul_vec(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.cols {
            return Err(PursuitError::DimensionMismatch(format!(
                "vector has length {} but matrix has {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok((0..self.rows).map(|i| crate::scalar::dot(self.row(i), x)).collect())
    }

    pub fn column_norm(&self, j: usize) -> T {
        crate::scalar::norm2(self.column(j))
    }
}
