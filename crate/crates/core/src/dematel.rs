//! DEMATEL: normalization of a direct-relation matrix, the total-relation
//! matrix `T = N (I - N)^-1`, its truncated power series, and the
//! prominence / relation (cause-effect) analysis.

use thiserror::Error;

use crate::matrix::{solve_linear, spectral_radius_estimate, DenseMatrix, MatrixError};

/// `total_relation` refuses normalized matrices whose spectral radius is
/// at or above `1 - SPECTRAL_GUARD`.
pub const SPECTRAL_GUARD: f64 = 1e-9;
/// `|R - C|` at or below this is classified as neutral.
pub const NEUTRAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DematelError {
    #[error("direct relation matrix must be square (got {rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("direct relation entry ({row}, {col}) is negative ({value})")]
    Negative { row: usize, col: usize, value: f64 },
    #[error("direct relation matrix is identically zero")]
    ZeroMatrix,
    #[error("series N + N^2 + ... diverges: spectral radius {spectral_radius} >= 1 - {SPECTRAL_GUARD:e}")]
    NonConvergent { spectral_radius: f64 },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Non-negative, not identically zero matrix of direct influences.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectRelationMatrix(DenseMatrix);

impl DirectRelationMatrix {
    pub fn new(m: DenseMatrix) -> Result<Self, DematelError> {
        check_square(&m)?;
        check_non_negative(&m)?;
        if m.max_abs() == 0.0 {
            return Err(DematelError::ZeroMatrix);
        }
        Ok(Self(m))
    }

    pub fn n(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.0
    }
}

/// Total (direct plus indirect) influence, entrywise non-negative.
#[derive(Debug, Clone, PartialEq)]
pub struct TotalRelationMatrix(DenseMatrix);

impl TotalRelationMatrix {
    pub fn new(m: DenseMatrix) -> Result<Self, DematelError> {
        check_square(&m)?;
        check_non_negative(&m)?;
        Ok(Self(m))
    }

    pub fn n(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    Cause,
    Effect,
    Neutral,
}

impl Category {
    pub fn as_str(self) -> &'static str {
        match self {
            Category::Cause => "cause",
            Category::Effect => "effect",
            Category::Neutral => "neutral",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProminenceRecord {
    pub factor: usize,
    /// Row sum of T: influence dispatched.
    pub r: f64,
    /// Column sum of T: influence received.
    pub c: f64,
    pub prominence: f64,
    pub relation: f64,
    pub category: Category,
}

/// Divides `D` by the largest of its row and column sums.
pub fn normalize(d: &DirectRelationMatrix) -> Result<DenseMatrix, DematelError> {
    let m = d.matrix();
    let s = m
        .row_sums()
        .into_iter()
        .chain(m.col_sums())
        .fold(0.0, f64::max);
    if s <= 0.0 {
        return Err(DematelError::ZeroMatrix);
    }
    Ok(m.scale(1.0 / s))
}

/// `T = N (I - N)^-1`, computed as the solution of `(I - N) T = N`
/// (`N` commutes with `(I - N)^-1`).
pub fn total_relation(n: &DenseMatrix) -> Result<TotalRelationMatrix, DematelError> {
    check_square(n)?;
    check_non_negative(n)?;
    let rho = spectral_radius_estimate(n)?;
    if rho >= 1.0 - SPECTRAL_GUARD {
        return Err(DematelError::NonConvergent {
            spectral_radius: rho,
        });
    }
    let dim = n.rows();
    let i_minus_n = DenseMatrix::identity(dim).sub(n)?;
    let mut t = solve_linear(&i_minus_n, n)?;
    // Every term of the series is non-negative; clear elimination round-off.
    let floor = 1e-12 * t.max_abs();
    for i in 0..dim {
        for j in 0..dim {
            if t[(i, j)] < 0.0 && t[(i, j)] >= -floor {
                t[(i, j)] = 0.0;
            }
        }
    }
    TotalRelationMatrix::new(t)
}

/// `N + N^2 + ... + N^k`.
pub fn truncated_series(n: &DenseMatrix, k: usize) -> Result<DenseMatrix, DematelError> {
    check_square(n)?;
    if k == 0 {
        return Err(MatrixError::InvalidArgument("series length must be at least 1").into());
    }
    let mut power = n.clone();
    let mut sum = n.clone();
    for _ in 1..k {
        power = power.matmul(n)?;
        sum = sum.add(&power)?;
    }
    Ok(sum)
}

/// Per-factor row/column sums of `T` with the cause/effect split.
pub fn prominence(t: &TotalRelationMatrix) -> Vec<ProminenceRecord> {
    let rows = t.matrix().row_sums();
    let cols = t.matrix().col_sums();
    rows.into_iter()
        .zip(cols)
        .enumerate()
        .map(|(factor, (r, c))| {
            let relation = r - c;
            let category = if relation.abs() <= NEUTRAL_TOL {
                Category::Neutral
            } else if relation > 0.0 {
                Category::Cause
            } else {
                Category::Effect
            };
            ProminenceRecord {
                factor,
                r,
                c,
                prominence: r + c,
                relation,
                category,
            }
        })
        .collect()
}

fn check_square(m: &DenseMatrix) -> Result<(), DematelError> {
    if !m.is_square() {
        return Err(DematelError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    Ok(())
}

fn check_non_negative(m: &DenseMatrix) -> Result<(), DematelError> {
    let cols = m.cols();
    match m.as_slice().iter().position(|v| *v < 0.0) {
        Some(k) => Err(DematelError::Negative {
            row: k / cols,
            col: k % cols,
            value: m.as_slice()[k],
        }),
        None => Ok(()),
    }
}
