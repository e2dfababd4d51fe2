//! Completion of an incomplete pairwise comparison matrix through DEMATEL.
//!
//! The pipeline has three stages:
//!
//! 1. the incomplete matrix becomes a direct-relation matrix, known values
//!    copied verbatim (diagonal included) and missing ones set to zero;
//! 2. the direct-relation matrix is normalized and its total-relation matrix
//!    `T` computed;
//! 3. each pair is recovered from `T` by solving
//!    `t_ij / c_ij = t_ji / c_ji` with `c_ij = 1 / c_ji`, whose positive
//!    solution is `c_ij = sqrt(t_ij / t_ji)`.
//!
//! On a consistent input (`m_ij = w_i / w_j`) with a connected comparison
//! graph the direct-relation matrix is `diag(w) A diag(w)^-1` for a symmetric
//! 0/1 pattern `A`, so `t_ij / t_ji = (w_i / w_j)^2` and the missing ratios
//! are recovered exactly.

use thiserror::Error;

use crate::dematel::{
    normalize, total_relation, truncated_series, DematelError, DirectRelationMatrix,
    TotalRelationMatrix,
};
use crate::matrix::{spectral_radius_estimate, DenseMatrix, MatrixError};
use crate::pcm::{
    components, consistency, CompletePcm, ConsistencyReport, IncompletePcm, PcmError,
};

/// Number of series terms used by the optional self-check.
pub const SERIES_CHECK_TERMS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CompletionMode {
    /// Fill only missing cells; known cells are copied bit for bit.
    #[default]
    PreserveKnown,
    /// Rebuild every off-diagonal cell from the total-relation matrix.
    Overwrite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CompletionOptions {
    pub mode: CompletionMode,
    /// Also sum the first [`SERIES_CHECK_TERMS`] powers of `N` and report
    /// the distance to the closed-form `T`.
    pub series_check: bool,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CompletionError {
    #[error("comparison graph is disconnected: components {components:?}")]
    Disconnected { components: Vec<Vec<usize>> },
    #[error("total relation is not positive at ({i}, {j}) (t_ij = {t_ij}, t_ji = {t_ji})")]
    ZeroTotalRelation {
        i: usize,
        j: usize,
        t_ij: f64,
        t_ji: f64,
    },
    #[error("total relation shape {t} does not match matrix order {n}")]
    SizeMismatch { t: usize, n: usize },
    #[error(transparent)]
    Dematel(#[from] DematelError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Pcm(#[from] PcmError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilledCell {
    pub i: usize,
    pub j: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompletionReport {
    pub completed: CompletePcm,
    /// Every cell that was missing in the input, both triangles, row-major.
    pub filled_cells: Vec<FilledCell>,
    /// Spectral-radius estimate of the normalized direct-relation matrix.
    pub spectral_radius: f64,
    pub consistency: ConsistencyReport,
    /// `max |T - (N + ... + N^200)|` when the series check was requested.
    pub series_residual: Option<f64>,
}

/// Known values copied as-is (diagonal included), missing cells set to 0.
pub fn to_direct_relation(pcm: &IncompletePcm) -> DirectRelationMatrix {
    let n = pcm.n();
    let m = DenseMatrix::from_fn(n, n, |i, j| pcm.get(i, j).unwrap_or(0.0));
    DirectRelationMatrix::new(m).expect("diagonal of a validated PCM is 1")
}

/// Reads the reciprocal comparison matrix off `T`.
pub fn from_total_relation(
    t: &TotalRelationMatrix,
    pcm: &IncompletePcm,
    opts: &CompletionOptions,
) -> Result<CompletePcm, CompletionError> {
    let n = pcm.n();
    if t.n() != n {
        return Err(CompletionError::SizeMismatch { t: t.n(), n });
    }
    let mut c = DenseMatrix::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            let known = pcm.get(i, j).zip(pcm.get(j, i));
            match (opts.mode, known) {
                (CompletionMode::PreserveKnown, Some((upper, lower))) => {
                    c[(i, j)] = upper;
                    c[(j, i)] = lower;
                }
                _ => {
                    let (t_ij, t_ji) = (t.get(i, j), t.get(j, i));
                    if !(t_ij > 0.0 && t_ji > 0.0) {
                        return Err(CompletionError::ZeroTotalRelation { i, j, t_ij, t_ji });
                    }
                    let v = (t_ij / t_ji).sqrt();
                    c[(i, j)] = v;
                    c[(j, i)] = 1.0 / v;
                }
            }
        }
    }
    Ok(CompletePcm::new(pcm.labels().to_vec(), c)?)
}

/// Runs the full completion pipeline.
///
/// In [`CompletionMode::PreserveKnown`] a matrix with nothing missing is
/// returned unchanged without solving for `T`; only the spectral radius of
/// its normalized form is reported.
pub fn complete(
    pcm: &IncompletePcm,
    opts: &CompletionOptions,
) -> Result<CompletionReport, CompletionError> {
    let comps = components(pcm);
    if comps.len() > 1 {
        return Err(CompletionError::Disconnected { components: comps });
    }

    let direct = to_direct_relation(pcm);
    let normalized = normalize(&direct)?;

    let spectral_radius = spectral_radius_estimate(&normalized)?;

    let (completed, series_residual) =
        if opts.mode == CompletionMode::PreserveKnown && pcm.missing_count() == 0 {
            (pcm.to_complete()?, None)
        } else {
            let t = total_relation(&normalized)?;
            let series_residual = if opts.series_check {
                let s = truncated_series(&normalized, SERIES_CHECK_TERMS)?;
                Some(t.matrix().max_abs_diff(&s)?)
            } else {
                None
            };
            (from_total_relation(&t, pcm, opts)?, series_residual)
        };

    let n = pcm.n();
    let mut filled_cells = Vec::with_capacity(pcm.missing_count());
    for i in 0..n {
        for j in 0..n {
            if !pcm.is_known(i, j) {
                filled_cells.push(FilledCell {
                    i,
                    j,
                    value: completed.get(i, j),
                });
            }
        }
    }

    let consistency = consistency(&completed)?;
    Ok(CompletionReport {
        completed,
        filled_cells,
        spectral_radius,
        consistency,
        series_residual,
    })
}
