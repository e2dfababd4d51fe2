//! Pairwise comparison matrices: validation, comparison-graph connectivity,
//! consistency checking and priority extraction.

use std::collections::VecDeque;

use thiserror::Error;

use crate::matrix::{
    principal_eigenpair, DenseMatrix, MatrixError, DEFAULT_EIGEN_MAX_ITER, DEFAULT_EIGEN_TOL,
};

/// Allowed deviation of `m_ij * m_ji` from 1 on user input.
pub const INPUT_RECIPROCITY_TOL: f64 = 1e-6;
/// Allowed deviation of `m_ij * m_ji` from 1 on matrices produced by this crate.
pub const RECIPROCITY_TOL: f64 = 1e-9;
/// A matrix is acceptable when its consistency ratio is below this.
pub const CR_THRESHOLD: f64 = 0.1;

/// Random consistency index by matrix order, for n = 1..=10.
pub const RANDOM_INDEX: [f64; 10] = [0.0, 0.0, 0.52, 0.89, 1.12, 1.26, 1.36, 1.41, 1.46, 1.49];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PcmError {
    #[error("a pairwise comparison matrix needs at least 2 alternatives (got {0})")]
    TooSmall(usize),
    #[error("comparison grid must be square: row {row} has {len} cells, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("expected {expected} labels, got {actual}")]
    LabelCount { expected: usize, actual: usize },
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("entry ({i}, {j}) must be positive and finite (got {value})")]
    NonPositive { i: usize, j: usize, value: f64 },
    #[error("diagonal entry ({i}, {i}) must be 1 (got {value})")]
    NonUnitDiagonal { i: usize, value: f64 },
    #[error("entry ({i}, {j}) is given but its mirror ({j}, {i}) is not")]
    AsymmetricPattern { i: usize, j: usize },
    #[error("entries ({i}, {j}) and ({j}, {i}) are not reciprocal: product {product}")]
    NonReciprocal { i: usize, j: usize, product: f64 },
    #[error("matrix has {0} missing entries")]
    Incomplete(usize),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// A raw comparison value together with the relative rounding error of the
/// text it came from (0 for exact values such as fractions).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Judgment {
    pub value: f64,
    pub rounding: f64,
}

impl Judgment {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            rounding: 0.0,
        }
    }
}

impl From<f64> for Judgment {
    fn from(value: f64) -> Self {
        Self::exact(value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidateOptions {
    /// Fill the mirror of a one-sided entry with its reciprocal.
    pub autofill_reciprocal: bool,
    /// Allowed `|m_ij * m_ji - 1|`, on top of the rounding carried by each
    /// [`Judgment`].
    pub reciprocity_tol: f64,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self {
            autofill_reciprocal: true,
            reciprocity_tol: INPUT_RECIPROCITY_TOL,
        }
    }
}

/// Square reciprocal comparison matrix in which symmetric pairs of entries
/// may be missing. The diagonal is always known and equal to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct IncompletePcm {
    n: usize,
    labels: Vec<String>,
    entries: Vec<Option<f64>>,
}

impl IncompletePcm {
    /// Validates a grid of exact values. See [`IncompletePcm::validate_judgments`].
    pub fn validate(
        grid: &[Vec<Option<f64>>],
        labels: Vec<String>,
        opts: &ValidateOptions,
    ) -> Result<Self, PcmError> {
        let grid: Vec<Vec<Option<Judgment>>> = grid
            .iter()
            .map(|row| row.iter().map(|c| c.map(Judgment::exact)).collect())
            .collect();
        Self::validate_judgments(grid, labels, opts).map(|(pcm, _)| pcm)
    }

    /// Validates a raw grid and returns the matrix with any notes about
    /// reconciled pairs.
    ///
    /// Blank diagonal cells become 1 and, when enabled, one-sided pairs are
    /// mirrored with the exact reciprocal. A pair given on both sides must
    /// multiply to 1 within the configured tolerance plus the rounding of its
    /// two cells; pairs that are not reciprocal to within
    /// [`RECIPROCITY_TOL`] are replaced by `g` and `1 / g`, where `ln g` is
    /// the mean of `ln m_ij` and `-ln m_ji` weighted by the inverse squared
    /// rounding of each cell (the plain geometric mean `sqrt(m_ij / m_ji)`
    /// when both cells are equally precise).
    pub fn validate_judgments(
        grid: Vec<Vec<Option<Judgment>>>,
        labels: Vec<String>,
        opts: &ValidateOptions,
    ) -> Result<(Self, Vec<String>), PcmError> {
        let n = grid.len();
        if n < 2 {
            return Err(PcmError::TooSmall(n));
        }
        for (row, cells) in grid.iter().enumerate() {
            if cells.len() != n {
                return Err(PcmError::NotSquare {
                    row,
                    len: cells.len(),
                    expected: n,
                });
            }
        }
        check_labels(&labels, n)?;

        for (i, row) in grid.iter().enumerate() {
            for (j, cell) in row.iter().enumerate() {
                if let Some(c) = cell {
                    if !(c.value > 0.0) || !c.value.is_finite() {
                        return Err(PcmError::NonPositive {
                            i,
                            j,
                            value: c.value,
                        });
                    }
                    if i == j && (c.value - 1.0).abs() > opts.reciprocity_tol + c.rounding {
                        return Err(PcmError::NonUnitDiagonal { i, value: c.value });
                    }
                }
            }
        }

        let mut notes = Vec::new();
        let mut entries = vec![None; n * n];
        for i in 0..n {
            entries[i * n + i] = Some(1.0);
            for j in i + 1..n {
                let (upper, lower) = match (grid[i][j], grid[j][i]) {
                    (None, None) => continue,
                    (Some(_), None) if !opts.autofill_reciprocal => {
                        return Err(PcmError::AsymmetricPattern { i, j });
                    }
                    (None, Some(_)) if !opts.autofill_reciprocal => {
                        return Err(PcmError::AsymmetricPattern { i: j, j: i });
                    }
                    (Some(a), None) => (a.value, 1.0 / a.value),
                    (None, Some(b)) => (1.0 / b.value, b.value),
                    (Some(a), Some(b)) => {
                        let product = a.value * b.value;
                        let dev = (product - 1.0).abs();
                        let slack = a.rounding + b.rounding + a.rounding * b.rounding;
                        if dev > opts.reciprocity_tol + slack {
                            return Err(PcmError::NonReciprocal { i, j, product });
                        }
                        if dev <= RECIPROCITY_TOL {
                            (a.value, b.value)
                        } else {
                            let g = reconcile(a, b);
                            // Only pairs that rounding alone cannot explain are worth a note.
                            if dev > opts.reciprocity_tol.min(INPUT_RECIPROCITY_TOL) + slack {
                                notes.push(format!(
                                    "{} vs {} reconciled: {} x {} = {product:.4}, using {g:.6}",
                                    labels[i], labels[j], a.value, b.value
                                ));
                            }
                            (g, 1.0 / g)
                        }
                    }
                };
                entries[i * n + j] = Some(upper);
                entries[j * n + i] = Some(lower);
            }
        }

        Ok((Self { n, labels, entries }, notes))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.entries[i * self.n + j]
    }

    pub fn is_known(&self, i: usize, j: usize) -> bool {
        self.get(i, j).is_some()
    }

    /// Missing pairs `(i, j)` with `i < j`.
    pub fn missing_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if !self.is_known(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn missing_count(&self) -> usize {
        self.entries.iter().filter(|e| e.is_none()).count()
    }

    pub fn to_grid(&self) -> Vec<Vec<Option<f64>>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// The fully known matrix, or [`PcmError::Incomplete`].
    pub fn to_complete(&self) -> Result<CompletePcm, PcmError> {
        let missing = self.missing_count();
        if missing > 0 {
            return Err(PcmError::Incomplete(missing));
        }
        let m = DenseMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j).unwrap_or(1.0));
        CompletePcm::new(self.labels.clone(), m)
    }

    /// Relabels alternatives so that new index `k` is old index `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert!(is_permutation(perm, self.n), "not a permutation of 0..n");
        let n = self.n;
        let mut entries = vec![None; n * n];
        for a in 0..n {
            for b in 0..n {
                entries[a * n + b] = self.get(perm[a], perm[b]);
            }
        }
        Self {
            n,
            labels: perm.iter().map(|&k| self.labels[k].clone()).collect(),
            entries,
        }
    }
}

/// Fully populated reciprocal comparison matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CompletePcm {
    labels: Vec<String>,
    matrix: DenseMatrix,
}

impl CompletePcm {
    /// Checks positivity, a unit diagonal and reciprocity to [`RECIPROCITY_TOL`].
    pub fn new(labels: Vec<String>, matrix: DenseMatrix) -> Result<Self, PcmError> {
        let n = matrix.rows();
        if !matrix.is_square() {
            return Err(PcmError::NotSquare {
                row: 0,
                len: matrix.cols(),
                expected: n,
            });
        }
        if n < 2 {
            return Err(PcmError::TooSmall(n));
        }
        check_labels(&labels, n)?;
        for i in 0..n {
            for j in 0..n {
                let v = matrix[(i, j)];
                if !(v > 0.0) {
                    return Err(PcmError::NonPositive { i, j, value: v });
                }
            }
            if (matrix[(i, i)] - 1.0).abs() > RECIPROCITY_TOL {
                return Err(PcmError::NonUnitDiagonal {
                    i,
                    value: matrix[(i, i)],
                });
            }
            for j in i + 1..n {
                let product = matrix[(i, j)] * matrix[(j, i)];
                if (product - 1.0).abs() > RECIPROCITY_TOL {
                    return Err(PcmError::NonReciprocal { i, j, product });
                }
            }
        }
        Ok(Self { labels, matrix })
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix[(i, j)]
    }

    /// `max |c_ij * c_ji - 1|` over all pairs.
    pub fn max_reciprocity_error(&self) -> f64 {
        let n = self.n();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.get(i, j) * self.get(j, i) - 1.0).abs());
            }
        }
        worst
    }

    pub fn as_incomplete(&self) -> IncompletePcm {
        let n = self.n();
        IncompletePcm {
            n,
            labels: self.labels.clone(),
            entries: self.matrix.as_slice().iter().map(|v| Some(*v)).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsistencyReport {
    pub n: usize,
    pub lambda_max: f64,
    pub ci: f64,
    pub ri: f64,
    pub cr: f64,
    pub acceptable: bool,
    /// Set when `n` exceeds the tabulated random index and RI(10) was used.
    pub ri_extrapolated: bool,
}

impl ConsistencyReport {
    /// Builds the report from a known principal eigenvalue.
    pub fn from_lambda(n: usize, lambda_max: f64) -> Self {
        let (ri, ri_extrapolated) = random_index(n);
        // lambda_max >= n for positive reciprocal matrices; clamp round-off.
        let ci = if n >= 2 {
            ((lambda_max - n as f64) / (n as f64 - 1.0)).max(0.0)
        } else {
            0.0
        };
        let (cr, acceptable) = if ri > 0.0 {
            let cr = ci / ri;
            (cr, cr < CR_THRESHOLD)
        } else {
            (0.0, ci <= 1e-9)
        };
        Self {
            n,
            lambda_max,
            ci,
            ri,
            cr,
            acceptable,
            ri_extrapolated,
        }
    }
}

/// Random index for an `n x n` matrix and whether it was clamped to RI(10).
pub fn random_index(n: usize) -> (f64, bool) {
    match n {
        0 => (0.0, false),
        1..=10 => (RANDOM_INDEX[n - 1], false),
        _ => (RANDOM_INDEX[9], true),
    }
}

/// Normalized priority weights and the induced ranking.
#[derive(Debug, Clone, PartialEq)]
pub struct PriorityVector {
    pub weights: Vec<f64>,
    /// Alternative indices by descending weight; ties keep ascending index.
    pub ranking: Vec<usize>,
}

impl PriorityVector {
    /// Sum-normalizes positive weights and ranks them.
    pub fn from_weights(weights: &[f64]) -> Self {
        let total: f64 = weights.iter().sum();
        let weights: Vec<f64> = weights.iter().map(|w| w / total).collect();
        let mut ranking: Vec<usize> = (0..weights.len()).collect();
        ranking.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
        Self { weights, ranking }
    }
}

pub fn consistency(pcm: &CompletePcm) -> Result<ConsistencyReport, MatrixError> {
    let eig = principal_eigenpair(pcm.matrix(), DEFAULT_EIGEN_TOL, DEFAULT_EIGEN_MAX_ITER)?;
    Ok(ConsistencyReport::from_lambda(pcm.n(), eig.value))
}

pub fn priorities(pcm: &CompletePcm) -> Result<PriorityVector, MatrixError> {
    let eig = principal_eigenpair(pcm.matrix(), DEFAULT_EIGEN_TOL, DEFAULT_EIGEN_MAX_ITER)?;
    Ok(PriorityVector::from_weights(&eig.vector))
}

/// Whether the comparison graph (alternatives joined by known pairs) is connected.
pub fn connectivity(pcm: &IncompletePcm) -> bool {
    components(pcm).len() == 1
}

/// Connected components of the comparison graph, each sorted, ordered by
/// their smallest member.
pub fn components(pcm: &IncompletePcm) -> Vec<Vec<usize>> {
    let n = pcm.n();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if !seen[v] && v != u && pcm.is_known(u, v) {
                    seen[v] = true;
                    comp.push(v);
                    queue.push_back(v);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Upper value implied by a pair `(a, b)` with `a ~ 1 / b`, trusting the
/// more precisely printed cell more.
fn reconcile(a: Judgment, b: Judgment) -> f64 {
    let (la, lb) = (a.value.ln(), -b.value.ln());
    let log = match (a.rounding > 0.0, b.rounding > 0.0) {
        (false, true) => la,
        (true, false) => lb,
        (true, true) => {
            let (wa, wb) = (b.rounding * b.rounding, a.rounding * a.rounding);
            (wa * la + wb * lb) / (wa + wb)
        }
        (false, false) => 0.5 * (la + lb),
    };
    log.exp()
}

fn check_labels(labels: &[String], n: usize) -> Result<(), PcmError> {
    if labels.len() != n {
        return Err(PcmError::LabelCount {
            expected: n,
            actual: labels.len(),
        });
    }
    for (k, l) in labels.iter().enumerate() {
        if labels[..k].contains(l) {
            return Err(PcmError::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

fn is_permutation(perm: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    perm.len() == n
        && perm
            .iter()
            .all(|&k| k < n && !std::mem::replace(&mut seen[k], true))
}

/// Default labels `A`, `B`, ..., `Z`, `A1`, ...
pub fn default_labels(n: usize) -> Vec<String> {
    (0..n)
        .map(|k| {
            let letter = char::from(b'A' + (k % 26) as u8);
            if k < 26 {
                letter.to_string()
            } else {
                format!("{letter}{}", k / 26)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const X: Option<f64> = None;

    fn k(v: f64) -> Option<f64> {
        Some(v)
    }

    pub(crate) fn worked_example() -> IncompletePcm {
        let grid = vec![
            vec![k(1.0), X, k(4.0), k(8.0)],
            vec![X, k(1.0), k(2.0), k(4.0)],
            vec![k(0.25), k(0.5), k(1.0), k(2.0)],
            vec![k(0.125), k(0.25), k(0.5), k(1.0)],
        ];
        IncompletePcm::validate(&grid, default_labels(4), &ValidateOptions::default()).unwrap()
    }

    #[test]
    fn worked_example_validates_with_one_missing_pair() {
        let pcm = worked_example();
        assert_eq!(pcm.missing_pairs(), vec![(0, 1)]);
        assert_eq!(pcm.missing_count(), 2);
        assert_eq!(pcm.get(2, 0), Some(0.25));
        assert!(connectivity(&pcm));
    }

    #[test]
    fn single_alternative_is_rejected() {
        let err = IncompletePcm::validate(&[vec![k(1.0)]], default_labels(1), &Default::default());
        assert_eq!(err, Err(PcmError::TooSmall(1)));
    }

    #[test]
    fn non_reciprocal_pair_is_rejected() {
        let grid = vec![vec![k(1.0), k(2.0)], vec![k(0.4), k(1.0)]];
        match IncompletePcm::validate(&grid, default_labels(2), &Default::default()) {
            Err(PcmError::NonReciprocal {
                i: 0,
                j: 1,
                product,
            }) => {
                assert!((product - 0.8).abs() < 1e-12)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_positive_values_are_rejected() {
        let grid = vec![vec![k(1.0), k(0.0)], vec![X, k(1.0)]];
        assert!(matches!(
            IncompletePcm::validate(&grid, default_labels(2), &Default::default()),
            Err(PcmError::NonPositive { i: 0, j: 1, .. })
        ));
        let grid = vec![vec![k(1.0), k(-3.0)], vec![X, k(1.0)]];
        assert!(matches!(
            IncompletePcm::validate(&grid, default_labels(2), &Default::default()),
            Err(PcmError::NonPositive { .. })
        ));
    }

    #[test]
    fn blank_diagonal_and_one_sided_pairs_are_filled() {
        let grid = vec![vec![X, k(3.0)], vec![X, X]];
        let pcm = IncompletePcm::validate(&grid, default_labels(2), &Default::default()).unwrap();
        assert_eq!(pcm.get(0, 0), Some(1.0));
        assert_eq!(pcm.get(1, 0), Some(1.0 / 3.0));
        assert_eq!(pcm.missing_count(), 0);
    }

    #[test]
    fn one_sided_pair_without_autofill_is_asymmetric() {
        let grid = vec![vec![k(1.0), X], vec![k(3.0), k(1.0)]];
        let opts = ValidateOptions {
            autofill_reciprocal: false,
            ..Default::default()
        };
        assert_eq!(
            IncompletePcm::validate(&grid, default_labels(2), &opts),
            Err(PcmError::AsymmetricPattern { i: 1, j: 0 })
        );
    }

    #[test]
    fn bad_diagonal_is_rejected() {
        let grid = vec![vec![k(2.0), X], vec![X, k(1.0)]];
        assert!(matches!(
            IncompletePcm::validate(&grid, default_labels(2), &Default::default()),
            Err(PcmError::NonUnitDiagonal { i: 0, .. })
        ));
    }

    #[test]
    fn rounded_pairs_are_reconciled_within_their_precision() {
        let grid = vec![
            vec![
                None,
                Some(Judgment {
                    value: 1.39,
                    rounding: 0.005 / 1.39,
                }),
            ],
            vec![
                Some(Judgment {
                    value: 0.72,
                    rounding: 0.005 / 0.72,
                }),
                None,
            ],
        ];
        let (pcm, notes) =
            IncompletePcm::validate_judgments(grid, default_labels(2), &Default::default())
                .unwrap();
        // 1.39 is printed with about half the relative error of 0.72, so the
        // reconciled value sits four times closer to it (in log terms) than
        // to 1 / 0.72.
        let g = pcm.get(0, 1).unwrap();
        let (to_a, to_b) = ((g / 1.39).ln().abs(), (g * 0.72).ln().abs());
        assert!(g < 1.39 && g > 1.0 / 0.72 || g > 1.39 && g < 1.0 / 0.72);
        let ratio = (0.72f64 / 1.39).powi(2);
        assert!((to_a / to_b - ratio).abs() < 1e-9);
        assert_eq!(pcm.get(1, 0), Some(1.0 / g));
        assert_eq!(notes.len(), 0);
    }

    #[test]
    fn six_decimal_pair_trusts_the_larger_value() {
        let small = 0.040378;
        let big = 24.766051;
        let grid = vec![
            vec![
                None,
                Some(Judgment {
                    value: small,
                    rounding: 5e-7 / small,
                }),
            ],
            vec![
                Some(Judgment {
                    value: big,
                    rounding: 5e-7 / big,
                }),
                None,
            ],
        ];
        let (pcm, notes) =
            IncompletePcm::validate_judgments(grid, default_labels(2), &Default::default())
                .unwrap();
        assert!((pcm.get(1, 0).unwrap() - big).abs() < 1e-9);
        assert!((pcm.get(0, 1).unwrap() - small).abs() < 5e-7);
        assert_eq!(notes.len(), 0);
    }

    #[test]
    fn loose_tolerance_reconciles_and_notes_typos() {
        let grid = vec![
            vec![
                None,
                Some(Judgment {
                    value: 1.18,
                    rounding: 0.005 / 1.18,
                }),
            ],
            vec![
                Some(Judgment {
                    value: 0.90,
                    rounding: 0.005 / 0.90,
                }),
                None,
            ],
        ];
        let strict =
            IncompletePcm::validate_judgments(grid.clone(), default_labels(2), &Default::default());
        assert!(matches!(
            strict,
            Err(PcmError::NonReciprocal { i: 0, j: 1, .. })
        ));
        let loose = ValidateOptions {
            reciprocity_tol: 0.1,
            ..Default::default()
        };
        let (pcm, notes) =
            IncompletePcm::validate_judgments(grid, default_labels(2), &loose).unwrap();
        assert_eq!(notes.len(), 1);
        assert!(notes[0].starts_with("A vs B reconciled"));
        assert!((pcm.get(0, 1).unwrap() * pcm.get(1, 0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exact_reciprocals_are_kept_verbatim() {
        let grid = vec![vec![k(1.0), k(1.0 / 3.0)], vec![k(3.0), k(1.0)]];
        let pcm = IncompletePcm::validate(&grid, default_labels(2), &Default::default()).unwrap();
        assert_eq!(pcm.get(0, 1), Some(1.0 / 3.0));
        assert_eq!(pcm.get(1, 0), Some(3.0));
    }

    #[test]
    fn label_checks() {
        let grid = vec![vec![k(1.0), X], vec![X, k(1.0)]];
        assert!(matches!(
            IncompletePcm::validate(&grid, vec!["a".into()], &Default::default()),
            Err(PcmError::LabelCount { .. })
        ));
        assert!(matches!(
            IncompletePcm::validate(&grid, vec!["a".into(), "a".into()], &Default::default()),
            Err(PcmError::DuplicateLabel(_))
        ));
    }

    #[test]
    fn connectivity_cases() {
        let x = X;
        let one = k(1.0);
        let block = vec![
            vec![one, k(2.0), x, x],
            vec![x, one, x, x],
            vec![x, x, one, k(3.0)],
            vec![x, x, x, one],
        ];
        let pcm = IncompletePcm::validate(&block, default_labels(4), &Default::default()).unwrap();
        assert!(!connectivity(&pcm));
        assert_eq!(components(&pcm), vec![vec![0, 1], vec![2, 3]]);

        let star = vec![
            vec![one, k(2.0), k(3.0), k(4.0)],
            vec![x, one, x, x],
            vec![x, x, one, x],
            vec![x, x, x, one],
        ];
        let pcm = IncompletePcm::validate(&star, default_labels(4), &Default::default()).unwrap();
        assert!(connectivity(&pcm));
    }

    #[test]
    fn random_index_table() {
        let expected = [0.0, 0.0, 0.52, 0.89, 1.12, 1.26, 1.36, 1.41, 1.46, 1.49];
        for (n, ri) in (1..=10).zip(expected) {
            assert_eq!(random_index(n), (ri, false), "n = {n}");
        }
        assert_eq!(random_index(25), (1.49, true));
    }

    #[test]
    fn two_by_two_is_always_consistent() {
        for a in [0.1, 1.0, 3.7, 9.0] {
            let m = DenseMatrix::from_rows(&[[1.0, a], [1.0 / a, 1.0]]).unwrap();
            let pcm = CompletePcm::new(default_labels(2), m).unwrap();
            let r = consistency(&pcm).unwrap();
            assert!((r.lambda_max - 2.0).abs() < 1e-12);
            assert!(r.ci.abs() < 1e-12);
            assert_eq!(r.ri, 0.0);
            assert!(r.acceptable);
        }
    }

    #[test]
    fn inconsistent_matrix_is_rejected() {
        // 1 > 2 by 9, 2 > 3 by 9, but 3 > 1 by 9.
        let m = DenseMatrix::from_rows(&[
            [1.0, 9.0, 1.0 / 9.0],
            [1.0 / 9.0, 1.0, 9.0],
            [9.0, 1.0 / 9.0, 1.0],
        ])
        .unwrap();
        let r = consistency(&CompletePcm::new(default_labels(3), m).unwrap()).unwrap();
        assert!(r.cr > CR_THRESHOLD);
        assert!(!r.acceptable);
    }

    #[test]
    fn uniform_matrix_has_uniform_weights() {
        for n in 2..7 {
            let m = DenseMatrix::from_fn(n, n, |_, _| 1.0);
            let pv = priorities(&CompletePcm::new(default_labels(n), m).unwrap()).unwrap();
            for w in &pv.weights {
                assert!((w - 1.0 / n as f64).abs() < 1e-15);
            }
            assert_eq!(pv.ranking, (0..n).collect::<Vec<_>>());
        }
    }

    #[test]
    fn ranking_breaks_ties_by_index() {
        let pv = PriorityVector::from_weights(&[1.0, 3.0, 1.0, 3.0]);
        assert_eq!(pv.ranking, vec![1, 3, 0, 2]);
    }

    #[test]
    fn complete_pcm_rejects_non_reciprocal() {
        let m = DenseMatrix::from_rows(&[[1.0, 2.0], [0.5 + 1e-6, 1.0]]).unwrap();
        assert!(matches!(
            CompletePcm::new(default_labels(2), m),
            Err(PcmError::NonReciprocal { .. })
        ));
    }

    #[test]
    fn to_complete_requires_all_entries() {
        assert_eq!(worked_example().to_complete(), Err(PcmError::Incomplete(2)));
    }

    #[test]
    fn default_labels_are_unique() {
        let labels = default_labels(60);
        assert_eq!(&labels[..3], ["A", "B", "C"]);
        assert!(check_labels(&labels, 60).is_ok());
    }
}
