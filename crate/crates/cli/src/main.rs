use std::path::PathBuf;
use std::process::ExitCode;

use ahpfill_cli::bench::{bench_csv, run_bench, run_ladder, BenchSpec, Param};
use ahpfill_cli::commands::{
    cmd_complete, cmd_consistency, cmd_dematel, cmd_rank, InputKind, Output, ReadOptions,
};
use ahpfill_cli::CliError;
use ahpfill_core::{CompletionMode, TransformConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Complete incomplete pairwise comparison matrices with DEMATEL and rank
/// the alternatives.
#[derive(Parser)]
#[command(name = "ahpfill", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fill the missing cells of a comparison matrix.
    Complete {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Preserve)]
        mode: Mode,
        /// Write the completed matrix here (the summary then goes to stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        read: ReadArgs,
    },
    /// Complete a matrix (or head-to-head table) and print the ranking.
    Rank {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Kind::Pcm)]
        kind: Kind,
        /// `odds` or `smoothed:<alpha>`.
        #[arg(long, default_value = "smoothed:1")]
        transform: TransformConfig,
        #[arg(long, value_enum, default_value_t = Mode::Preserve)]
        mode: Mode,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        read: ReadArgs,
        /// Drop head-to-head pairs whose two records disagree.
        #[arg(long)]
        lenient: bool,
    },
    /// Report lambda_max, CI, RI and CR of a complete matrix.
    Consistency {
        input: PathBuf,
        #[command(flatten)]
        read: ReadArgs,
    },
    /// Total-relation matrix and prominence of a direct-relation matrix.
    Dematel {
        input: PathBuf,
        /// Write the total-relation matrix here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the prominence table here.
        #[arg(long)]
        prominence: Option<PathBuf>,
    },
    /// Synthetic reconstruction benchmark.
    Bench(BenchArgs),
}

#[derive(Args)]
struct ReadArgs {
    /// Allowed |m_ij * m_ji - 1| on top of the printed precision of a pair.
    #[arg(long, default_value_t = ReadOptions::default().reciprocity_tol)]
    reciprocity_tol: f64,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Matrix size, or a range `lo-hi` sampled per trial.
    #[arg(long, default_value = "8")]
    n: Param<usize>,
    /// Fraction of pairs removed, or a range `lo-hi` sampled per trial.
    #[arg(long, default_value = "0.3")]
    missing: Param<f64>,
    /// Log-normal noise on the known cells.
    #[arg(long, default_value_t = 0.0)]
    sigma: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Add a wall-time column (makes the output run-dependent).
    #[arg(long)]
    timing: bool,
    /// Comma-separated sizes; report median wall time per size instead.
    #[arg(long, value_delimiter = ',')]
    ladder: Option<Vec<usize>>,
    /// Runs per trial in ladder mode; the fastest is kept.
    #[arg(long, default_value_t = 3)]
    repeats: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Preserve,
    Overwrite,
}

impl From<Mode> for CompletionMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Preserve => CompletionMode::PreserveKnown,
            Mode::Overwrite => CompletionMode::Overwrite,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Pcm,
    Headtohead,
}

fn read_options(read: &ReadArgs, lenient: bool) -> ReadOptions {
    ReadOptions {
        reciprocity_tol: read.reciprocity_tol,
        lenient,
    }
}

fn bench(args: &BenchArgs) -> Result<Output, CliError> {
    let spec = BenchSpec {
        n: args.n,
        missing_fraction: args.missing,
        noise_sigma: args.sigma,
        trials: args.trials,
        seed: args.seed,
    };
    let body = match &args.ladder {
        Some(sizes) => run_ladder(&spec, sizes, args.repeats)?.to_csv(),
        None => bench_csv(&run_bench(&spec)?, args.timing),
    };
    let mut out = Output::default();
    match &args.out {
        Some(p) => out.files.push((p.clone(), body)),
        None => out.stdout = body,
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<Output, CliError> {
    match cli.command {
        Command::Complete {
            input,
            mode,
            out,
            read,
        } => cmd_complete(
            &input,
            mode.into(),
            out.as_deref(),
            &read_options(&read, false),
        ),
        Command::Rank {
            input,
            kind,
            transform,
            mode,
            out,
            read,
            lenient,
        } => {
            let kind = match kind {
                Kind::Pcm => InputKind::Pcm,
                Kind::Headtohead => InputKind::HeadToHead,
            };
            cmd_rank(
                &input,
                kind,
                &transform,
                mode.into(),
                out.as_deref(),
                &read_options(&read, lenient),
            )
        }
        Command::Consistency { input, read } => {
            cmd_consistency(&input, &read_options(&read, false))
        }
        Command::Dematel {
            input,
            out,
            prominence,
        } => cmd_dematel(&input, out.as_deref(), prominence.as_deref()),
        Command::Bench(args) => bench(&args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = match run(cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    for line in &output.stderr {
        eprintln!("{line}");
    }
    if let Err(e) = output.write_files() {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(2);
    }
    print!("{}", output.stdout);
    ExitCode::SUCCESS
}
