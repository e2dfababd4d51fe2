//! Dense real matrices and the handful of numerical kernels the rest of the
//! crate is built on: partial-pivot Gaussian elimination, a Perron-root
//! power iteration, and a certified spectral-radius estimate for
//! non-negative matrices.

use std::fmt;
use std::ops::{Index, IndexMut};

use thiserror::Error;

/// Default stopping tolerance for [`principal_eigenpair`].
pub const DEFAULT_EIGEN_TOL: f64 = 1e-12;
/// Default iteration cap for [`principal_eigenpair`].
pub const DEFAULT_EIGEN_MAX_ITER: usize = 10_000;

/// Pivots smaller than this fraction of the largest entry count as zero.
const PIVOT_RELATIVE_THRESHOLD: f64 = 1e-12;
const SPECTRAL_MAX_ITER: usize = 200_000;
const SPECTRAL_REL_TOL: f64 = 1e-13;
const SPECTRAL_STEP_TOL: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrixError {
    #[error("matrix dimensions must be at least 1x1 (got {rows}x{cols})")]
    Empty { rows: usize, cols: usize },
    #[error("expected {expected} entries for the requested shape, got {actual}")]
    EntryCount { expected: usize, actual: usize },
    #[error("entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("matrix must be square (got {rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape mismatch: {lhs_rows}x{lhs_cols} against {rhs_rows}x{rhs_cols}")]
    ShapeMismatch {
        lhs_rows: usize,
        lhs_cols: usize,
        rhs_rows: usize,
        rhs_cols: usize,
    },
    #[error("matrix is singular (pivot {pivot:e} at column {column})")]
    SingularMatrix { column: usize, pivot: f64 },
    #[error(
        "power iteration did not converge after {iterations} iterations (residual {residual:e})"
    )]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("power iteration requires strictly positive entries; ({row}, {col}) = {value}")]
    NotPositive { row: usize, col: usize, value: f64 },
    #[error("expected non-negative entries; ({row}, {col}) = {value}")]
    NegativeEntry { row: usize, col: usize, value: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

/// Row-major dense matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::Empty { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(MatrixError::EntryCount {
                expected: rows * cols,
                actual: data.len(),
            });
        }
        if let Some(k) = data.iter().position(|v| !v.is_finite()) {
            return Err(MatrixError::NonFinite {
                row: k / cols,
                col: k % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows. All rows must have the same length.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, MatrixError> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != n_cols {
                return Err(MatrixError::EntryCount {
                    expected: n_rows * n_cols,
                    actual: n_rows * r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Self::from_row_major(n_rows, n_cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds an `rows x cols` matrix by evaluating `f(i, j)` at each cell.
    ///
    /// Panics if `f` produces a non-finite value.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::from_row_major(rows, cols, data).expect("from_fn produced an invalid matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.rows).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.cols];
        for i in 0..self.rows {
            for (s, v) in sums.iter_mut().zip(self.row(i)) {
                *s += v;
            }
        }
        sums
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Infinity norm: maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, alpha: f64) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| alpha * self.get(i, j))
    }

    pub fn add(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_same_shape(other)?;
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j) + other.get(i, j)
        }))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_same_shape(other)?;
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j) - other.get(i, j)
        }))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.cols != other.rows {
            return Err(self.mismatch(other));
        }
        let mut out = vec![0.0; self.rows * other.cols];
        for i in 0..self.rows {
            let out_row = &mut out[i * other.cols..(i + 1) * other.cols];
            for (k, a) in self.row(i).iter().enumerate() {
                if *a == 0.0 {
                    continue;
                }
                for (o, b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        Self::from_row_major(self.rows, other.cols, out)
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols, "vector length must match column count");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64, MatrixError> {
        self.check_same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    fn check_same_shape(&self, other: &Self) -> Result<(), MatrixError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(self.mismatch(other));
        }
        Ok(())
    }

    fn mismatch(&self, other: &Self) -> MatrixError {
        MatrixError::ShapeMismatch {
            lhs_rows: self.rows,
            lhs_cols: self.cols,
            rhs_rows: other.rows,
            rhs_cols: other.cols,
        }
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for v in self.row(i) {
                write!(f, "{v:>12.6} ")?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Dominant eigenvalue with its sum-normalized eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub iterations: usize,
    /// `max_i |(Av)_i - value * v_i|`
    pub residual: f64,
}

/// Solves `A X = B` by Gaussian elimination with partial pivoting.
pub fn solve_linear(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix, MatrixError> {
    if !a.is_square() {
        return Err(MatrixError::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    if b.rows != a.rows {
        return Err(a.mismatch(b));
    }
    let n = a.rows;
    let m = b.cols;
    let threshold = PIVOT_RELATIVE_THRESHOLD * a.max_abs();
    let mut lu = a.data.clone();
    let mut x = b.data.clone();

    for col in 0..n {
        let (pivot_row, pivot_abs) =
            (col..n)
                .map(|r| (r, lu[r * n + col].abs()))
                .fold(
                    (col, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
        if pivot_abs <= threshold || pivot_abs == 0.0 {
            return Err(MatrixError::SingularMatrix {
                column: col,
                pivot: pivot_abs,
            });
        }
        if pivot_row != col {
            for k in 0..n {
                lu.swap(col * n + k, pivot_row * n + k);
            }
            for k in 0..m {
                x.swap(col * m + k, pivot_row * m + k);
            }
        }
        let pivot = lu[col * n + col];
        for r in col + 1..n {
            let factor = lu[r * n + col] / pivot;
            if factor == 0.0 {
                continue;
            }
            lu[r * n + col] = 0.0;
            for k in col + 1..n {
                lu[r * n + k] -= factor * lu[col * n + k];
            }
            for k in 0..m {
                x[r * m + k] -= factor * x[col * m + k];
            }
        }
    }

    for col in (0..n).rev() {
        let pivot = lu[col * n + col];
        for k in 0..m {
            let mut acc = x[col * m + k];
            for j in col + 1..n {
                acc -= lu[col * n + j] * x[j * m + k];
            }
            x[col * m + k] = acc / pivot;
        }
    }

    DenseMatrix::from_row_major(n, m, x)
}

/// Perron eigenpair of a strictly positive square matrix by power iteration
/// from the uniform vector.
///
/// Iteration stops once two successive eigenvalue estimates differ by less
/// than `tol`. The eigenvalue estimate is `sum(A v)` for the sum-normalized
/// iterate `v`.
pub fn principal_eigenpair(
    a: &DenseMatrix,
    tol: f64,
    max_iter: usize,
) -> Result<EigenPair, MatrixError> {
    if !a.is_square() {
        return Err(MatrixError::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    if !(tol > 0.0) {
        return Err(MatrixError::InvalidArgument("tol must be positive"));
    }
    if max_iter == 0 {
        return Err(MatrixError::InvalidArgument("max_iter must be at least 1"));
    }
    if let Some(k) = a.data.iter().position(|v| *v <= 0.0) {
        return Err(MatrixError::NotPositive {
            row: k / a.cols,
            col: k % a.cols,
            value: a.data[k],
        });
    }

    let n = a.rows;
    let mut v = vec![1.0 / n as f64; n];
    let mut lambda = f64::NAN;
    let mut residual = f64::INFINITY;

    for iter in 1..=max_iter {
        let w = a.mul_vec(&v);
        let next: f64 = w.iter().sum();
        residual = w
            .iter()
            .zip(&v)
            .fold(0.0, |m, (wi, vi)| m.max((wi - next * vi).abs()));
        let converged = (next - lambda).abs() < tol;
        lambda = next;
        v = w.into_iter().map(|x| x / next).collect();
        if converged {
            return Ok(EigenPair {
                value: lambda,
                vector: v,
                iterations: iter,
                residual,
            });
        }
    }

    if residual <= tol * lambda.abs().max(1.0) {
        return Ok(EigenPair {
            value: lambda,
            vector: v,
            iterations: max_iter,
            residual,
        });
    }
    Err(MatrixError::NoConvergence {
        iterations: max_iter,
        residual,
    })
}

/// Spectral-radius estimate for a square non-negative matrix.
///
/// Runs power iteration on the shifted matrix `A + sI` (with `s` the
/// infinity norm of `A`, so the estimate is positively homogeneous) from the
/// all-ones vector and brackets the Perron root with Collatz-Wielandt
/// bounds. The shift makes irreducible inputs primitive, so periodic
/// matrices converge too. If the bracket fails to close within the
/// iteration budget (reducible inputs), the upper bound is returned.
pub fn spectral_radius_estimate(a: &DenseMatrix) -> Result<f64, MatrixError> {
    if !a.is_square() {
        return Err(MatrixError::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    if let Some(k) = a.data.iter().position(|v| *v < 0.0) {
        return Err(MatrixError::NegativeEntry {
            row: k / a.cols,
            col: k % a.cols,
            value: a.data[k],
        });
    }
    let shift = a.norm_inf();
    if shift == 0.0 {
        return Ok(0.0);
    }
    let n = a.rows;
    let mut x = vec![1.0; n];
    let mut upper = f64::INFINITY;

    for _ in 0..SPECTRAL_MAX_ITER {
        let mut y = a.mul_vec(&x);
        for (yi, xi) in y.iter_mut().zip(&x) {
            *yi += shift * xi;
        }
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for (yi, xi) in y.iter().zip(&x) {
            if *xi > 0.0 {
                let r = yi / xi;
                lo = lo.min(r);
                hi = hi.max(r);
            }
        }
        upper = upper.min(hi);
        if hi - lo <= SPECTRAL_REL_TOL * hi {
            return Ok((0.5 * (lo + hi) - shift).max(0.0));
        }
        let norm = y.iter().fold(0.0, |m: f64, v| m.max(*v));
        let next: Vec<f64> = y.into_iter().map(|v| v / norm).collect();
        // On reducible matrices the bracket may never close while the
        // iterate itself settles; `norm` is then the dominant eigenvalue.
        let step = next
            .iter()
            .zip(&x)
            .fold(0.0, |m: f64, (a, b)| m.max((a - b).abs()));
        if step <= SPECTRAL_STEP_TOL {
            return Ok((norm.min(upper) - shift).max(0.0));
        }
        x = next;
    }
    Ok((upper - shift).max(0.0))
}
