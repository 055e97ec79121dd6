use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Square complex matrix in compressed sparse row form.
///
/// Column indices are strictly increasing within each row, so there are no
/// duplicate entries; [`SparseMatrix::from_triplets`] sums duplicates.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    n: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<Complex64>,
}

impl SparseMatrix {
    /// Assembles from `(row, col, value)` triplets. Duplicates are summed.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, Complex64)>) -> Result<Self> {
        if let Some(&(r, c, _)) = triplets.iter().find(|(r, c, _)| *r >= n || *c >= n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: r.max(c) + 1,
            });
        }
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));

        let mut row_offsets = vec![0usize; n + 1];
        let mut col_indices = Vec::with_capacity(triplets.len());
        let mut values: Vec<Complex64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_indices.push(c);
                values.push(v);
                row_offsets[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..n {
            row_offsets[i + 1] += row_offsets[i];
        }
        Ok(Self {
            n,
            row_offsets,
            col_indices,
            values,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            row_offsets: (0..=n).collect(),
            col_indices: (0..n).collect(),
            values: vec![Complex64::new(1.0, 0.0); n],
        }
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::identity(diag.len());
        m.values.copy_from_slice(diag);
        m
    }

    /// Drops entries with exactly zero value.
    pub fn from_dense(a: &DMatrix<Complex64>) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(Error::DimensionMismatch {
                expected: a.nrows(),
                got: a.ncols(),
            });
        }
        let n = a.nrows();
        let mut triplets = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let v = a[(i, j)];
                if v != Complex64::new(0.0, 0.0) {
                    triplets.push((i, j, v));
                }
            }
        }
        Self::from_triplets(n, triplets)
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for (i, j, v) in self.iter() {
            a[(i, j)] = v;
        }
        a
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Values may be rewritten in place; the sparsity pattern is fixed.
    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    /// All stored entries as `(row, col, value)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.n).flat_map(move |i| {
            (self.row_offsets[i]..self.row_offsets[i + 1])
                .map(move |k| (i, self.col_indices[k], self.values[k]))
        })
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        let (lo, hi) = (self.row_offsets[i], self.row_offsets[i + 1]);
        match self.col_indices[lo..hi].binary_search(&j) {
            Ok(k) => self.values[lo + k],
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let triplets = self.iter().map(|(i, j, v)| (j, i, v.conj())).collect();
        Self::from_triplets(self.n, triplets).expect("indices already validated")
    }

    /// `alpha * I + beta * self`. The result always stores the full diagonal.
    pub fn shifted(&self, alpha: Complex64, beta: Complex64) -> Self {
        let mut triplets: Vec<_> = self.iter().map(|(i, j, v)| (i, j, beta * v)).collect();
        triplets.extend((0..self.n).map(|i| (i, i, alpha)));
        Self::from_triplets(self.n, triplets).expect("indices already validated")
    }

    /// `y = A x`.
    pub fn spmv(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut y = vec![Complex64::new(0.0, 0.0); self.n];
        self.spmv_into(x, &mut y)?;
        Ok(y)
    }

    pub fn spmv_into(&self, x: &[Complex64], y: &mut [Complex64]) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        if y.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: y.len(),
            });
        }
        for (i, yi) in y.iter_mut().enumerate() {
            let (lo, hi) = (self.row_offsets[i], self.row_offsets[i + 1]);
            let mut acc = Complex64::new(0.0, 0.0);
            for k in lo..hi {
                acc += self.values[k] * x[self.col_indices[k]];
            }
            *yi = acc;
        }
        Ok(())
    }

    /// Largest entrywise modulus of `self - other`; patterns may differ.
    pub fn max_abs_diff(&self, other: &SparseMatrix) -> f64 {
        let mut m = 0.0f64;
        for (i, j, v) in self.iter() {
            m = m.max((v - other.get(i, j)).norm());
        }
        for (i, j, v) in other.iter() {
            m = m.max((v - self.get(i, j)).norm());
        }
        m
    }
}
