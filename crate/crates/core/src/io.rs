//! CSV ingestion and report emission.
//!
//! Matrix files carry a header row of labels followed by one row per
//! alternative, with no row-label column. Comparison cells hold a decimal,
//! a fraction `a/b`, or a missing marker (`*` or empty). Head-to-head files
//! use the same layout with `wins/total` cells.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use csv::{ReaderBuilder, StringRecord, Trim, WriterBuilder};
use thiserror::Error;

use crate::dematel::{DematelError, ProminenceRecord, TotalRelationMatrix};
use crate::matrix::DenseMatrix;
use crate::pcm::{
    CompletePcm, IncompletePcm, Judgment, PcmError, PriorityVector, ValidateOptions,
    RECIPROCITY_TOL,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IoError {
    /// `line` is the 1-based line in the input, `column` the 1-based field.
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: u64,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Format(String),
    #[error(
        "mismatched head-to-head records for {a} vs {b}: {a_wins}/{a_total} against {b_wins}/{b_total}"
    )]
    MismatchedMirror {
        a: String,
        b: String,
        a_wins: u32,
        a_total: u32,
        b_wins: u32,
        b_total: u32,
    },
    #[error("transform produced {value} for {wins}/{total} ({a} vs {b})")]
    DegenerateTransform {
        a: String,
        b: String,
        wins: u32,
        total: u32,
        value: f64,
    },
    #[error(
        "transform violates reciprocity for {wins}/{total}: f(w, t) * f(t - w, t) = {product}"
    )]
    ContractViolation { wins: u32, total: u32, product: f64 },
    #[error(transparent)]
    Pcm(#[from] PcmError),
    #[error(transparent)]
    Dematel(#[from] DematelError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParseOptions {
    pub validate: ValidateOptions,
    /// Read a literal zero as a missing cell (with a warning) instead of
    /// rejecting it.
    pub zero_as_missing: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        Self {
            validate: ValidateOptions::default(),
            zero_as_missing: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedPcm {
    pub pcm: IncompletePcm,
    pub warnings: Vec<String>,
}

/// Parses a comparison-matrix CSV and validates it with reciprocal auto-fill.
///
/// Decimal cells carry their printed precision into validation, so a pair
/// such as `1.39` / `0.72` is accepted as a rounded reciprocal pair.
pub fn parse_pcm_csv(text: &str, opts: &ParseOptions) -> Result<ParsedPcm, IoError> {
    let (labels, rows) = read_table(text)?;
    let mut warnings = Vec::new();
    let mut grid = Vec::with_capacity(rows.len());
    for (r, (line, record)) in rows.iter().enumerate() {
        let mut cells = Vec::with_capacity(labels.len());
        for (c, field) in record.iter().enumerate() {
            let cell = match field {
                "" | "*" => None,
                _ => {
                    let j = parse_judgment(field).map_err(|message| IoError::Parse {
                        line: *line,
                        column: c + 1,
                        message,
                    })?;
                    if j.value == 0.0 && opts.zero_as_missing {
                        warnings.push(format!(
                            "line {line}, column {}: zero comparison for {} vs {} treated as missing",
                            c + 1,
                            labels[r],
                            labels[c]
                        ));
                        None
                    } else {
                        Some(j)
                    }
                }
            };
            cells.push(cell);
        }
        grid.push(cells);
    }
    let (pcm, notes) = IncompletePcm::validate_judgments(grid, labels, &opts.validate)?;
    warnings.extend(notes);
    Ok(ParsedPcm { pcm, warnings })
}

/// Parses a non-negative relation matrix (direct or total). Empty cells are 0.
pub fn parse_relation_csv(text: &str) -> Result<(Vec<String>, DenseMatrix), IoError> {
    let (labels, rows) = read_table(text)?;
    let n = labels.len();
    let mut data = Vec::with_capacity(n * n);
    for (line, record) in &rows {
        for (c, field) in record.iter().enumerate() {
            let value = if field.is_empty() {
                0.0
            } else {
                parse_judgment(field)
                    .map_err(|message| IoError::Parse {
                        line: *line,
                        column: c + 1,
                        message,
                    })?
                    .value
            };
            if value < 0.0 {
                return Err(IoError::Parse {
                    line: *line,
                    column: c + 1,
                    message: format!("relation strength must be non-negative (got {value})"),
                });
            }
            data.push(value);
        }
    }
    let m = DenseMatrix::from_row_major(n, n, data).map_err(|e| IoError::Format(e.to_string()))?;
    Ok((labels, m))
}

/// Wins and matches played for one ordered pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Record {
    pub wins: u32,
    pub total: u32,
}

/// Sparse head-to-head results. Every present pair is stored in both
/// directions with matching totals and complementary wins.
#[derive(Debug, Clone, PartialEq)]
pub struct HeadToHeadTable {
    labels: Vec<String>,
    cells: BTreeMap<(usize, usize), Record>,
}

impl HeadToHeadTable {
    /// Builds a table from one-sided records `(winner-side i, j) -> record`,
    /// mirroring each as `(t - w) / t`.
    pub fn from_records(
        labels: Vec<String>,
        records: impl IntoIterator<Item = ((usize, usize), Record)>,
    ) -> Result<Self, IoError> {
        let n = labels.len();
        let mut raw = BTreeMap::new();
        for ((i, j), rec) in records {
            if i >= n || j >= n || i == j {
                return Err(IoError::Format(format!(
                    "invalid head-to-head pair ({i}, {j})"
                )));
            }
            check_record(rec).map_err(IoError::Format)?;
            raw.insert((i, j), rec);
        }
        let (table, _) = Self::reconcile(labels, raw, false)?;
        Ok(table)
    }

    fn reconcile(
        labels: Vec<String>,
        raw: BTreeMap<(usize, usize), Record>,
        lenient: bool,
    ) -> Result<(Self, Vec<String>), IoError> {
        let mut cells = BTreeMap::new();
        let mut warnings = Vec::new();
        for (&(i, j), &rec) in &raw {
            let mirror = raw.get(&(j, i)).copied();
            if let Some(m) = mirror {
                if i > j {
                    continue;
                }
                if m.total != rec.total || m.wins + rec.wins != rec.total {
                    let err = IoError::MismatchedMirror {
                        a: labels[i].clone(),
                        b: labels[j].clone(),
                        a_wins: rec.wins,
                        a_total: rec.total,
                        b_wins: m.wins,
                        b_total: m.total,
                    };
                    if lenient {
                        warnings.push(format!("dropped: {err}"));
                        continue;
                    }
                    return Err(err);
                }
            }
            cells.insert((i, j), rec);
            cells.insert(
                (j, i),
                Record {
                    wins: rec.total - rec.wins,
                    total: rec.total,
                },
            );
        }
        Ok((Self { labels, cells }, warnings))
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn get(&self, i: usize, j: usize) -> Option<Record> {
        self.cells.get(&(i, j)).copied()
    }

    /// Present ordered pairs, both directions, in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), Record)> + '_ {
        self.cells.iter().map(|(k, v)| (*k, *v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HeadToHeadOptions {
    /// Drop inconsistent mirrored pairs with a warning instead of failing.
    pub lenient: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedHeadToHead {
    pub table: HeadToHeadTable,
    pub warnings: Vec<String>,
}

/// Parses a head-to-head CSV whose cells are blank or `wins/total`.
pub fn parse_headtohead_csv(
    text: &str,
    opts: &HeadToHeadOptions,
) -> Result<ParsedHeadToHead, IoError> {
    let (labels, rows) = read_table(text)?;
    let mut raw = BTreeMap::new();
    for (i, (line, record)) in rows.iter().enumerate() {
        for (j, field) in record.iter().enumerate() {
            if field.is_empty() {
                continue;
            }
            let err = |message: String| IoError::Parse {
                line: *line,
                column: j + 1,
                message,
            };
            if i == j {
                return Err(err("diagonal cells must be blank".into()));
            }
            let rec = parse_record(field).map_err(err)?;
            raw.insert((i, j), rec);
        }
    }
    let (table, warnings) = HeadToHeadTable::reconcile(labels, raw, opts.lenient)?;
    Ok(ParsedHeadToHead { table, warnings })
}

type TransformFn = dyn Fn(u32, u32) -> f64 + Send + Sync;

/// Maps a `wins/total` record to a multiplicative preference ratio.
///
/// Every transform must satisfy `f(w, t) * f(t - w, t) = 1`.
#[derive(Clone)]
pub enum TransformConfig {
    /// `w / (t - w)`; undefined for sweeps and shut-outs.
    WinRatioOdds,
    /// `(w + alpha) / (t - w + alpha)`.
    SmoothedOdds {
        alpha: f64,
    },
    Custom(Arc<TransformFn>),
}

impl TransformConfig {
    pub fn custom(f: impl Fn(u32, u32) -> f64 + Send + Sync + 'static) -> Self {
        Self::Custom(Arc::new(f))
    }

    pub fn apply(&self, wins: u32, total: u32) -> f64 {
        let (w, l) = (f64::from(wins), f64::from(total) - f64::from(wins));
        match self {
            Self::WinRatioOdds => w / l,
            Self::SmoothedOdds { alpha } => (w + alpha) / (l + alpha),
            Self::Custom(f) => f(wins, total),
        }
    }
}

impl Default for TransformConfig {
    fn default() -> Self {
        Self::SmoothedOdds { alpha: 1.0 }
    }
}

impl fmt::Debug for TransformConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::WinRatioOdds => write!(f, "WinRatioOdds"),
            Self::SmoothedOdds { alpha } => write!(f, "SmoothedOdds({alpha})"),
            Self::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl FromStr for TransformConfig {
    type Err = String;

    /// `odds` or `smoothed:<alpha>` (`smoothed` alone means alpha = 1).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once(':') {
            None if s == "odds" => Ok(Self::WinRatioOdds),
            None if s == "smoothed" => Ok(Self::default()),
            Some(("smoothed", a)) => match a.parse::<f64>() {
                Ok(alpha) if alpha > 0.0 && alpha.is_finite() => Ok(Self::SmoothedOdds { alpha }),
                _ => Err(format!(
                    "smoothing alpha must be a positive number, got {a:?}"
                )),
            },
            _ => Err(format!(
                "unknown transform {s:?} (expected `odds` or `smoothed:<alpha>`)"
            )),
        }
    }
}

/// Converts head-to-head records into an incomplete comparison matrix.
/// Pairs that never met are missing.
pub fn headtohead_to_pcm(
    table: &HeadToHeadTable,
    cfg: &TransformConfig,
) -> Result<IncompletePcm, IoError> {
    let n = table.n();
    let mut grid = vec![vec![None; n]; n];
    for ((i, j), rec) in table.iter() {
        if i > j {
            continue;
        }
        let v = cfg.apply(rec.wins, rec.total);
        let mirror = cfg.apply(rec.total - rec.wins, rec.total);
        if !(v > 0.0 && v.is_finite()) {
            return Err(IoError::DegenerateTransform {
                a: table.labels[i].clone(),
                b: table.labels[j].clone(),
                wins: rec.wins,
                total: rec.total,
                value: v,
            });
        }
        let product = v * mirror;
        if !((product - 1.0).abs() <= RECIPROCITY_TOL) {
            return Err(IoError::ContractViolation {
                wins: rec.wins,
                total: rec.total,
                product,
            });
        }
        grid[i][j] = Some(v);
        grid[j][i] = Some(1.0 / v);
    }
    Ok(IncompletePcm::validate(
        &grid,
        table.labels.clone(),
        &ValidateOptions::default(),
    )?)
}

/// A matrix to be written as CSV.
#[derive(Debug, Clone, Copy)]
pub enum MatrixView<'a> {
    Complete(&'a CompletePcm),
    Incomplete(&'a IncompletePcm),
    Relation {
        matrix: &'a TotalRelationMatrix,
        labels: &'a [String],
    },
}

/// Header of labels, then one row per alternative at 6 decimals; missing
/// cells print as `*`.
pub fn write_matrix_csv(view: MatrixView<'_>) -> String {
    let (labels, n): (&[String], usize) = match view {
        MatrixView::Complete(m) => (m.labels(), m.n()),
        MatrixView::Incomplete(m) => (m.labels(), m.n()),
        MatrixView::Relation { matrix, labels } => (labels, matrix.n()),
    };
    let cell = |i, j| match view {
        MatrixView::Complete(m) => Some(m.get(i, j)),
        MatrixView::Incomplete(m) => m.get(i, j),
        MatrixView::Relation { matrix, .. } => Some(matrix.get(i, j)),
    };
    let mut rows = Vec::with_capacity(n + 1);
    rows.push(labels.to_vec());
    for i in 0..n {
        rows.push(
            (0..n)
                .map(|j| cell(i, j).map_or_else(|| "*".to_string(), |v| fixed(v, 6)))
                .collect(),
        );
    }
    write_rows(&rows)
}

/// `rank,label,priority` rows by descending priority, 4 decimals.
pub fn write_ranking_report(pv: &PriorityVector, labels: &[String]) -> String {
    let mut rows = vec![vec!["rank".into(), "label".into(), "priority".into()]];
    for (rank, &k) in pv.ranking.iter().enumerate() {
        rows.push(vec![
            (rank + 1).to_string(),
            labels[k].clone(),
            fixed(pv.weights[k], 4),
        ]);
    }
    write_rows(&rows)
}

/// `label,R,C,prominence,relation,category` rows in factor order.
pub fn write_prominence_csv(records: &[ProminenceRecord], labels: &[String]) -> String {
    let mut rows = vec![["label", "R", "C", "prominence", "relation", "category"]
        .map(String::from)
        .to_vec()];
    for r in records {
        rows.push(vec![
            labels[r.factor].clone(),
            fixed(r.r, 6),
            fixed(r.c, 6),
            fixed(r.prominence, 6),
            fixed(r.relation, 6),
            r.category.as_str().into(),
        ]);
    }
    write_rows(&rows)
}

/// Fixed-point formatting that never prints a negative zero.
pub fn fixed(v: f64, decimals: usize) -> String {
    let s = format!("{v:.decimals$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

fn write_rows(rows: &[Vec<String>]) -> String {
    let mut w = WriterBuilder::new().from_writer(Vec::new());
    for r in rows {
        w.write_record(r).expect("writing to memory cannot fail");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 input")
}

type Rows = Vec<(u64, StringRecord)>;

/// Reads header labels and exactly `n` rows of `n` fields each.
fn read_table(text: &str) -> Result<(Vec<String>, Rows), IoError> {
    let mut reader = ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(Trim::All)
        .from_reader(text.as_bytes());
    let labels: Vec<String> = reader
        .headers()
        .map_err(|e| IoError::Format(e.to_string()))?
        .iter()
        .map(String::from)
        .collect();
    let n = labels.len();
    if n == 0 || labels.iter().all(String::is_empty) {
        return Err(IoError::Format("missing header row of labels".into()));
    }
    if let Some(k) = labels.iter().position(String::is_empty) {
        return Err(IoError::Parse {
            line: 1,
            column: k + 1,
            message: "empty label".into(),
        });
    }
    let mut rows = Vec::with_capacity(n);
    for rec in reader.records() {
        let rec = rec.map_err(|e| IoError::Format(e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != n {
            return Err(IoError::Parse {
                line,
                column: rec.len().min(n) + 1,
                message: format!("expected {n} fields, found {}", rec.len()),
            });
        }
        rows.push((line, rec));
    }
    if rows.len() != n {
        return Err(IoError::Format(format!(
            "expected {n} data rows to match {n} labels, found {}",
            rows.len()
        )));
    }
    Ok((labels, rows))
}

/// Parses a decimal or `a/b` fraction, tracking the relative rounding
/// implied by the printed number of decimals.
fn parse_judgment(field: &str) -> Result<Judgment, String> {
    let (value, rounding) = match field.split_once('/') {
        Some((a, b)) => {
            let (na, ra) = parse_decimal(a)?;
            let (nb, rb) = parse_decimal(b)?;
            if nb == 0.0 {
                return Err(format!("division by zero in {field:?}"));
            }
            (na / nb, ra + rb)
        }
        None => parse_decimal(field)?,
    };
    if !value.is_finite() {
        return Err(format!("{field:?} is not a finite number"));
    }
    Ok(Judgment { value, rounding })
}

fn parse_decimal(s: &str) -> Result<(f64, f64), String> {
    let s = s.trim();
    let ok = !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E'));
    let v: f64 =
        if ok { s.parse().ok() } else { None }.ok_or_else(|| format!("{s:?} is not a number"))?;
    let rounding = match s.split_once('.') {
        Some((_, frac)) if !s.contains(['e', 'E']) && v != 0.0 => {
            0.5 * 10f64.powi(-(frac.len() as i32)) / v.abs()
        }
        _ => 0.0,
    };
    Ok((v, rounding))
}

fn parse_record(field: &str) -> Result<Record, String> {
    let (w, t) = field
        .split_once('/')
        .ok_or_else(|| format!("expected wins/total, found {field:?}"))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<u32>()
            .map_err(|_| format!("{s:?} is not a non-negative integer"))
    };
    let rec = Record {
        wins: parse(w)?,
        total: parse(t)?,
    };
    check_record(rec)?;
    Ok(rec)
}

fn check_record(rec: Record) -> Result<(), String> {
    if rec.total == 0 {
        return Err("total number of matches must be positive".into());
    }
    if rec.wins > rec.total {
        return Err(format!("wins {} exceed total {}", rec.wins, rec.total));
    }
    Ok(())
}
