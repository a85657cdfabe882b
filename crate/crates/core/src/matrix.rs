//! Column-oriented matrix storage.
//!
//! Every matrix in a problem is kept column by column so that a worker owning
//! a column range `[lo, hi)` touches a contiguous block of memory (dense) or a
//! contiguous run of column lists (sparse).

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum ColumnMatrix {
    /// Column-major values, `data[j * nrows + i]` is entry `(i, j)`.
    Dense {
        nrows: usize,
        ncols: usize,
        data: Vec<f64>,
    },
    /// Per-column `(row, value)` lists, rows strictly increasing inside a column.
    Sparse {
        nrows: usize,
        ncols: usize,
        cols: Vec<Vec<(usize, f64)>>,
    },
}

impl ColumnMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        ColumnMatrix::Dense {
            nrows,
            ncols,
            data: vec![0.0; nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut data = vec![0.0; n * n];
        for (j, &d) in diag.iter().enumerate() {
            data[j * n + j] = d;
        }
        ColumnMatrix::Dense {
            nrows: n,
            ncols: n,
            data,
        }
    }

    /// Builds a dense matrix from row-major nested rows. `ncols` is needed
    /// for the zero-row case.
    pub fn from_rows(rows: &[Vec<f64>], ncols: usize) -> Result<Self> {
        let nrows = rows.len();
        let mut data = vec![0.0; nrows * ncols];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != ncols {
                return Err(Error::dim(format!("row {i}"), ncols, row.len()));
            }
            for (j, &v) in row.iter().enumerate() {
                data[j * nrows + i] = v;
            }
        }
        Ok(ColumnMatrix::Dense { nrows, ncols, data })
    }

    pub fn from_col_major(nrows: usize, ncols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != nrows * ncols {
            return Err(Error::dim("column-major data", nrows * ncols, data.len()));
        }
        Ok(ColumnMatrix::Dense { nrows, ncols, data })
    }

    /// Builds a sparse matrix; entries of each column are sorted by row and
    /// duplicate rows are summed.
    pub fn from_columns(nrows: usize, mut cols: Vec<Vec<(usize, f64)>>) -> Result<Self> {
        let ncols = cols.len();
        for (j, col) in cols.iter_mut().enumerate() {
            col.sort_by_key(|&(i, _)| i);
            let mut merged: Vec<(usize, f64)> = Vec::with_capacity(col.len());
            for &(i, v) in col.iter() {
                if i >= nrows {
                    return Err(Error::Invalid(format!(
                        "row index {i} out of range in column {j} (nrows = {nrows})"
                    )));
                }
                match merged.last_mut() {
                    Some(last) if last.0 == i => last.1 += v,
                    _ => merged.push((i, v)),
                }
            }
            *col = merged;
        }
        Ok(ColumnMatrix::Sparse { nrows, ncols, cols })
    }

    pub fn nrows(&self) -> usize {
        match self {
            ColumnMatrix::Dense { nrows, .. } | ColumnMatrix::Sparse { nrows, .. } => *nrows,
        }
    }

    pub fn ncols(&self) -> usize {
        match self {
            ColumnMatrix::Dense { ncols, .. } | ColumnMatrix::Sparse { ncols, .. } => *ncols,
        }
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self, ColumnMatrix::Sparse { .. })
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match self {
            ColumnMatrix::Dense { nrows, data, .. } => data[j * nrows + i],
            ColumnMatrix::Sparse { cols, .. } => cols[j]
                .binary_search_by_key(&i, |&(r, _)| r)
                .map(|k| cols[j][k].1)
                .unwrap_or(0.0),
        }
    }

    /// `out += alpha * M[:, j]`
    #[inline]
    pub fn axpy_column(&self, j: usize, alpha: f64, out: &mut [f64]) {
        match self {
            ColumnMatrix::Dense { nrows, data, .. } => {
                let col = &data[j * nrows..(j + 1) * nrows];
                for (o, &m) in out.iter_mut().zip(col) {
                    *o += alpha * m;
                }
            }
            ColumnMatrix::Sparse { cols, .. } => {
                for &(i, m) in &cols[j] {
                    out[i] += alpha * m;
                }
            }
        }
    }

    /// `M[:, j] . v`
    #[inline]
    pub fn column_dot(&self, j: usize, v: &[f64]) -> f64 {
        match self {
            ColumnMatrix::Dense { nrows, data, .. } => data[j * nrows..(j + 1) * nrows]
                .iter()
                .zip(v)
                .map(|(m, x)| m * x)
                .sum(),
            ColumnMatrix::Sparse { cols, .. } => cols[j].iter().map(|&(i, m)| m * v[i]).sum(),
        }
    }

    /// Partial product over a column range: `sum_{j in cols} x[j] * M[:, j]`.
    pub fn matvec_columns(&self, cols: std::ops::Range<usize>, x: &[f64], out: &mut [f64]) {
        for j in cols {
            let xj = x[j];
            if xj != 0.0 {
                self.axpy_column(j, xj, out);
            }
        }
    }

    /// Serial `M x`.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.nrows()];
        self.matvec_columns(0..self.ncols(), x, &mut out);
        out
    }

    /// Serial `M^T v`.
    pub fn transpose_matvec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.ncols()).map(|j| self.column_dot(j, v)).collect()
    }

    pub fn frobenius_sq(&self) -> f64 {
        match self {
            ColumnMatrix::Dense { data, .. } => data.iter().map(|v| v * v).sum(),
            ColumnMatrix::Sparse { cols, .. } => cols.iter().flatten().map(|&(_, v)| v * v).sum(),
        }
    }

    pub fn frobenius(&self) -> f64 {
        self.frobenius_sq().sqrt()
    }

    /// Largest `|M_ij - M_ji|`, or `None` when the matrix is not square.
    pub fn asymmetry(&self) -> Option<f64> {
        let n = self.nrows();
        if n != self.ncols() {
            return None;
        }
        let mut worst: f64 = 0.0;
        match self {
            ColumnMatrix::Dense { data, .. } => {
                for j in 0..n {
                    for i in (j + 1)..n {
                        worst = worst.max((data[j * n + i] - data[i * n + j]).abs());
                    }
                }
            }
            ColumnMatrix::Sparse { cols, .. } => {
                for (j, col) in cols.iter().enumerate() {
                    for &(i, v) in col {
                        worst = worst.max((v - self.get(j, i)).abs());
                    }
                }
            }
        }
        Some(worst)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.nrows())
            .map(|i| (0..self.ncols()).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn to_dense(&self) -> ColumnMatrix {
        match self {
            ColumnMatrix::Dense { .. } => self.clone(),
            ColumnMatrix::Sparse { nrows, ncols, cols } => {
                let mut data = vec![0.0; nrows * ncols];
                for (j, col) in cols.iter().enumerate() {
                    for &(i, v) in col {
                        data[j * nrows + i] = v;
                    }
                }
                ColumnMatrix::Dense {
                    nrows: *nrows,
                    ncols: *ncols,
                    data,
                }
            }
        }
    }

    pub fn to_nalgebra(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.nrows(), self.ncols(), |i, j| self.get(i, j))
    }

    pub fn scaled(&self, factor: f64) -> ColumnMatrix {
        let mut out = self.clone();
        match &mut out {
            ColumnMatrix::Dense { data, .. } => data.iter_mut().for_each(|v| *v *= factor),
            ColumnMatrix::Sparse { cols, .. } => cols.iter_mut().flatten().for_each(|(_, v)| *v *= factor),
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        match self {
            ColumnMatrix::Dense { data, .. } => data.iter().all(|v| v.is_finite()),
            ColumnMatrix::Sparse { cols, .. } => cols.iter().flatten().all(|(_, v)| v.is_finite()),
        }
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm_sq(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum()
}
