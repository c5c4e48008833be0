//! Complex sparse and dense matrix helpers shared by the operator modules.
//!
//! Sparse matrices are stored in compressed-column form; every operator built
//! from a labeled walk has at most a handful of nonzeros per column.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Compressed sparse column matrix over `C64`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<C64>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            col_ptr: vec![0; ncols + 1],
            row_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_triplets(n, n, (0..n).map(|i| (i, i, ONE)))
    }

    /// Builds a matrix from `(row, col, value)` triplets. Duplicate positions
    /// are summed; entries that sum to exactly zero are dropped.
    pub fn from_triplets<I>(nrows: usize, ncols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, C64)>,
    {
        let mut entries: Vec<(usize, usize, C64)> = triplets.into_iter().collect();
        for &(r, c, _) in &entries {
            assert!(r < nrows && c < ncols, "triplet ({r}, {c}) out of bounds");
        }
        entries.sort_by_key(|&(r, c, _)| (c, r));
        let mut merged: Vec<(usize, usize, C64)> = Vec::with_capacity(entries.len());
        for (r, c, v) in entries {
            match merged.last_mut() {
                Some(last) if (last.0, last.1) == (r, c) => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        merged.retain(|&(_, _, v)| v != ZERO);
        let mut col_ptr = vec![0usize; ncols + 1];
        let mut row_idx = Vec::with_capacity(merged.len());
        let mut values = Vec::with_capacity(merged.len());
        for (r, c, v) in merged {
            row_idx.push(r);
            values.push(v);
            col_ptr[c + 1] += 1;
        }
        for c in 0..ncols {
            col_ptr[c + 1] += col_ptr[c];
        }
        Self {
            nrows,
            ncols,
            col_ptr,
            row_idx,
            values,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Nonzeros of column `c` as `(row, value)` pairs in increasing row order.
    pub fn column(&self, c: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let range = self.col_ptr[c]..self.col_ptr[c + 1];
        self.row_idx[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.column(c)
            .find(|&(row, _)| row == r)
            .map(|(_, v)| v)
            .unwrap_or(ZERO)
    }

    /// All nonzeros in column-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.ncols).flat_map(move |c| self.column(c).map(move |(r, v)| (r, c, v)))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_triplets(
            self.ncols,
            self.nrows,
            self.triplets().map(|(r, c, v)| (c, r, v.conj())),
        )
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= s);
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        Self::from_triplets(
            self.nrows,
            self.ncols,
            self.triplets().chain(other.triplets()),
        )
    }

    /// Sparse product `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows, "inner dimensions differ");
        let mut trips = Vec::new();
        let mut acc: Vec<C64> = vec![ZERO; self.nrows];
        let mut touched: Vec<usize> = Vec::new();
        for c in 0..other.ncols {
            for (k, b) in other.column(c) {
                for (r, a) in self.column(k) {
                    if acc[r] == ZERO {
                        touched.push(r);
                    }
                    acc[r] += a * b;
                }
            }
            for &r in &touched {
                trips.push((r, c, acc[r]));
                acc[r] = ZERO;
            }
            touched.clear();
        }
        Self::from_triplets(self.nrows, other.ncols, trips)
    }

    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.ncols);
        let mut y = vec![ZERO; self.nrows];
        for (c, &xc) in x.iter().enumerate() {
            if xc == ZERO {
                continue;
            }
            for (r, v) in self.column(c) {
                y[r] += v * xc;
            }
        }
        y
    }

    /// `self * dense`.
    pub fn mul_dense(&self, dense: &CMatrix) -> CMatrix {
        assert_eq!(self.ncols, dense.nrows());
        let mut out = CMatrix::zeros(self.nrows, dense.ncols());
        for j in 0..dense.ncols() {
            for k in 0..self.ncols {
                let b = dense[(k, j)];
                if b == ZERO {
                    continue;
                }
                for (r, a) in self.column(k) {
                    out[(r, j)] += a * b;
                }
            }
        }
        out
    }

    /// `dense * self`.
    pub fn left_mul_dense(&self, dense: &CMatrix) -> CMatrix {
        assert_eq!(dense.ncols(), self.nrows);
        let mut out = CMatrix::zeros(dense.nrows(), self.ncols);
        for c in 0..self.ncols {
            for (k, v) in self.column(c) {
                for i in 0..dense.nrows() {
                    out[(i, c)] += dense[(i, k)] * v;
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.nrows, self.ncols);
        for (r, c, v) in self.triplets() {
            out[(r, c)] += v;
        }
        out
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Largest entrywise modulus of a dense matrix.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Spectral norm (largest singular value).
pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// Numerical rank: number of singular values strictly above `tol`.
pub fn rank(m: &CMatrix, tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .filter(|&&s| s > tol)
        .count()
}

/// Orthonormal basis of the null space of a square or wide matrix, computed
/// from the right singular vectors whose singular values fall below `tol`.
pub fn null_space(m: &CMatrix, tol: f64) -> Vec<CVector> {
    let n = m.ncols();
    if n == 0 {
        return Vec::new();
    }
    // Pad short-and-wide inputs so every right singular vector is returned.
    let a = if m.nrows() < n {
        let mut padded = CMatrix::zeros(n, n);
        padded.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
        padded
    } else {
        m.clone()
    };
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s < tol)
        .map(|(k, _)| v_t.row(k).adjoint())
        .collect()
}

/// Orthonormal basis for the span of `vectors`, dropping directions whose
/// singular value is below `tol`.
pub fn orthonormal_span(vectors: &[CVector], tol: f64) -> Vec<CVector> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let n = vectors[0].len();
    let m = CMatrix::from_columns(vectors);
    let svd = m.svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > tol)
        .map(|(k, _)| u.column(k).into_owned())
        .filter(|c: &CVector| c.len() == n)
        .collect()
}

/// Largest residual `‖v − QQ*v‖` over the given vectors, where `Q` is an
/// orthonormal basis. Vectors are normalized first.
pub fn projection_residual(vectors: &[CVector], onto_orthonormal: &[CVector]) -> f64 {
    vectors
        .iter()
        .map(|v| {
            let norm = v.norm();
            if norm == 0.0 {
                return 0.0;
            }
            let v = v / C64::new(norm, 0.0);
            let mut r = v.clone();
            for q in onto_orthonormal {
                let coeff = q.dotc(&v);
                r -= q * coeff;
            }
            r.norm()
        })
        .fold(0.0, f64::max)
}

/// Flattens a matrix column-major into a vector.
pub fn vectorize(m: &CMatrix) -> CVector {
    CVector::from_iterator(m.len(), m.iter().copied())
}

/// Inverse of [`vectorize`].
pub fn unvectorize(v: &CVector, nrows: usize, ncols: usize) -> CMatrix {
    CMatrix::from_iterator(nrows, ncols, v.iter().copied())
}
