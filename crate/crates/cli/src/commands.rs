//! The `complete`, `rank`, `consistency` and `dematel` subcommands.
//!
//! Each command computes everything up front and returns an [`Output`];
//! nothing touches the filesystem until the whole result is known, so a
//! failing command never leaves a partial file behind.

use std::fs;
use std::path::{Path, PathBuf};

use ahpfill_core::io::{fixed, HeadToHeadOptions};
use ahpfill_core::{
    complete, consistency, headtohead_to_pcm, normalize, parse_headtohead_csv, parse_pcm_csv,
    parse_relation_csv, priorities, prominence, total_relation, write_matrix_csv,
    write_prominence_csv, write_ranking_report, CompletePcm, CompletionMode, CompletionOptions,
    ConsistencyReport, DirectRelationMatrix, IncompletePcm, IoError, MatrixView, ParseOptions,
    PcmError, TransformConfig, ValidateOptions,
};

use crate::CliError;

/// What a command prints and which files it wants written.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Output {
    pub stdout: String,
    /// Warnings and secondary summaries, one per line.
    pub stderr: Vec<String>,
    pub files: Vec<(PathBuf, String)>,
}

impl Output {
    /// Sends `body` to `path` if given, otherwise to standard output.
    fn emit(&mut self, path: Option<&Path>, body: String) {
        match path {
            Some(p) => self.files.push((p.to_path_buf(), body)),
            None => self.stdout.push_str(&body),
        }
    }

    /// Writes every file, each through a temporary sibling and a rename.
    pub fn write_files(&self) -> std::io::Result<()> {
        for (path, body) in &self.files {
            let name = path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            let tmp = path.with_file_name(format!(".{name}.tmp"));
            fs::write(&tmp, body)?;
            fs::rename(&tmp, path)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InputKind {
    #[default]
    Pcm,
    HeadToHead,
}

/// Options shared by the commands that read a comparison matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReadOptions {
    /// Allowed `|m_ij * m_ji - 1|` beyond the printed precision of a pair.
    pub reciprocity_tol: f64,
    /// Drop inconsistent mirrored head-to-head records instead of failing.
    pub lenient: bool,
}

impl Default for ReadOptions {
    fn default() -> Self {
        Self {
            reciprocity_tol: ValidateOptions::default().reciprocity_tol,
            lenient: false,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn read_pcm(path: &Path, opts: &ReadOptions, out: &mut Output) -> Result<IncompletePcm, CliError> {
    let parse = ParseOptions {
        validate: ValidateOptions {
            reciprocity_tol: opts.reciprocity_tol,
            ..Default::default()
        },
        ..Default::default()
    };
    let parsed = parse_pcm_csv(&read(path)?, &parse).map_err(|e| match e {
        IoError::Pcm(PcmError::NonReciprocal { .. }) => CliError::Input(format!(
            "{e} (a looser --reciprocity-tol accepts it with a warning)"
        )),
        other => other.into(),
    })?;
    out.stderr.extend(parsed.warnings);
    Ok(parsed.pcm)
}

fn consistency_line(r: &ConsistencyReport) -> String {
    let verdict = if r.acceptable { "ACCEPT" } else { "REJECT" };
    let note = if r.ri_extrapolated {
        " (RI of n = 10 used)"
    } else {
        ""
    };
    format!(
        "lambda_max={} CI={} RI={} CR={} {verdict}{note}",
        fixed(r.lambda_max, 4),
        fixed(r.ci, 4),
        fixed(r.ri, 2),
        fixed(r.cr, 4)
    )
}

/// Completes a comparison matrix. With `out` the matrix goes to that file
/// and the summary to standard output; otherwise the matrix is printed and
/// the summary goes to standard error.
pub fn cmd_complete(
    input: &Path,
    mode: CompletionMode,
    out_path: Option<&Path>,
    read_opts: &ReadOptions,
) -> Result<Output, CliError> {
    let mut out = Output::default();
    let pcm = read_pcm(input, read_opts, &mut out)?;
    let opts = CompletionOptions {
        mode,
        series_check: false,
    };
    let report = complete(&pcm, &opts).map_err(|e| CliError::from_completion(e, pcm.labels()))?;
    let summary = format!(
        "{} cells filled; rho(N)={}; {}",
        report.filled_cells.len(),
        fixed(report.spectral_radius, 4),
        consistency_line(&report.consistency)
    );
    out.emit(
        out_path,
        write_matrix_csv(MatrixView::Complete(&report.completed)),
    );
    match out_path {
        Some(_) => out.stdout.push_str(&format!("{summary}\n")),
        None => out.stderr.push(summary),
    }
    Ok(out)
}

/// Reads `input` of the given kind, completes it and prints the ranking CSV.
pub fn cmd_rank(
    input: &Path,
    kind: InputKind,
    transform: &TransformConfig,
    mode: CompletionMode,
    out_path: Option<&Path>,
    read_opts: &ReadOptions,
) -> Result<Output, CliError> {
    let mut out = Output::default();
    let pcm = match kind {
        InputKind::Pcm => read_pcm(input, read_opts, &mut out)?,
        InputKind::HeadToHead => {
            let opts = HeadToHeadOptions {
                lenient: read_opts.lenient,
            };
            let parsed = parse_headtohead_csv(&read(input)?, &opts)?;
            out.stderr.extend(parsed.warnings);
            headtohead_to_pcm(&parsed.table, transform)?
        }
    };
    let opts = CompletionOptions {
        mode,
        series_check: false,
    };
    let report = complete(&pcm, &opts).map_err(|e| CliError::from_completion(e, pcm.labels()))?;
    let pv = priorities(&report.completed)?;
    out.emit(out_path, write_ranking_report(&pv, pcm.labels()));
    Ok(out)
}

/// Prints the consistency metadata of a complete comparison matrix.
pub fn cmd_consistency(input: &Path, read_opts: &ReadOptions) -> Result<Output, CliError> {
    let mut out = Output::default();
    let pcm = read_pcm(input, read_opts, &mut out)?;
    let c: CompletePcm = pcm.to_complete()?;
    let report = consistency(&c)?;
    out.stdout = format!("{}\n", consistency_line(&report));
    Ok(out)
}

/// Computes the total-relation matrix and prominence table of a
/// direct-relation CSV. Without output paths both tables are printed,
/// separated by a blank line.
pub fn cmd_dematel(
    input: &Path,
    total_out: Option<&Path>,
    prominence_out: Option<&Path>,
) -> Result<Output, CliError> {
    let mut out = Output::default();
    let (labels, d) = parse_relation_csv(&read(input)?)?;
    let n = normalize(&DirectRelationMatrix::new(d)?)?;
    let t = total_relation(&n)?;
    let total = write_matrix_csv(MatrixView::Relation {
        matrix: &t,
        labels: &labels,
    });
    let prom = write_prominence_csv(&prominence(&t), &labels);
    out.emit(total_out, total);
    if total_out.is_none() && prominence_out.is_none() {
        out.stdout.push('\n');
    }
    out.emit(prominence_out, prom);
    Ok(out)
}
