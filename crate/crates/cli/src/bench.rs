//! Synthetic evaluation harness: reconstruction error, rank agreement and
//! runtime of the completion pipeline on seeded random instances.
//!
//! Trial `k` of a run seeded with `s` draws everything from ChaCha8 seeded
//! with `s` on stream `k`: first the size and missing fraction (when given
//! as ranges), then weights uniform in `[0.1, 10)`, then the mask, then the
//! noise. Results therefore do not depend on thread scheduling.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use ahpfill_core::io::fixed;
use ahpfill_core::synth::{
    missing_pair_count, perturbed_pcm, random_connected_mask, random_weights, trial_rng,
};
use ahpfill_core::{complete, kendall_tau_b, priorities, CompletePcm, CompletionOptions};
use rand::Rng;
use rayon::prelude::*;

use crate::CliError;

pub const WEIGHT_RANGE: (f64, f64) = (0.1, 10.0);
pub const MASK_RETRIES: usize = 1000;

/// A fixed value or an inclusive range sampled per trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Param<T> {
    Fixed(T),
    Range(T, T),
}

impl<T: FromStr + PartialOrd + Copy + fmt::Display> FromStr for Param<T> {
    type Err = String;

    /// `v` or `lo-hi`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| {
            t.trim()
                .parse::<T>()
                .map_err(|_| format!("{t:?} is not a valid value"))
        };
        match s.split_once('-') {
            Some((lo, hi)) => {
                let (lo, hi) = (num(lo)?, num(hi)?);
                if lo > hi {
                    return Err(format!("empty range {lo}-{hi}"));
                }
                Ok(Param::Range(lo, hi))
            }
            None => num(s).map(Param::Fixed),
        }
    }
}

impl<T: fmt::Display> fmt::Display for Param<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Fixed(v) => write!(f, "{v}"),
            Param::Range(lo, hi) => write!(f, "{lo}-{hi}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchSpec {
    pub n: Param<usize>,
    pub missing_fraction: Param<f64>,
    /// Standard deviation of the log-normal perturbation of known cells.
    pub noise_sigma: f64,
    pub trials: usize,
    pub seed: u64,
}

impl BenchSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Input(m));
        let (n_lo, _) = bounds(self.n);
        if n_lo < 2 {
            return bad(format!("matrix size must be at least 2 (got {})", self.n));
        }
        let (f_lo, f_hi) = bounds(self.missing_fraction);
        if !(f_lo >= 0.0 && f_hi < 1.0) {
            return bad(format!(
                "missing fraction must lie in [0, 1) (got {})",
                self.missing_fraction
            ));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return bad(format!(
                "sigma must be non-negative (got {})",
                self.noise_sigma
            ));
        }
        if self.trials == 0 {
            return bad("at least one trial is required".into());
        }
        Ok(())
    }
}

fn bounds<T: Copy>(p: Param<T>) -> (T, T) {
    match p {
        Param::Fixed(v) => (v, v),
        Param::Range(lo, hi) => (lo, hi),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub trial: usize,
    pub n: usize,
    pub missing_pairs: usize,
    /// `max |ln c_ij - ln(w_i / w_j)|` over all cells of the completed matrix.
    pub max_log_error: f64,
    /// Tau-b between the computed priorities and the generating weights.
    pub kendall_tau: f64,
    pub cr_after: f64,
    /// Time spent completing and ranking (not drawing the instance).
    pub wall_time: Duration,
    pub completed: CompletePcm,
}

/// Runs one trial of `spec`.
pub fn run_trial(spec: &BenchSpec, trial: usize) -> Result<TrialResult, CliError> {
    let mut rng = trial_rng(spec.seed, trial as u64);
    let n = match spec.n {
        Param::Fixed(n) => n,
        Param::Range(lo, hi) => rng.gen_range(lo..=hi),
    };
    let fraction = match spec.missing_fraction {
        Param::Fixed(f) => f,
        Param::Range(lo, hi) => rng.gen_range(lo..=hi),
    };
    let weights = random_weights(&mut rng, n, WEIGHT_RANGE.0, WEIGHT_RANGE.1);
    let missing = missing_pair_count(n, fraction);
    let mask = random_connected_mask(&mut rng, n, missing, MASK_RETRIES)?;
    let pcm = perturbed_pcm(&mut rng, &weights, &mask, spec.noise_sigma)?;

    let start = Instant::now();
    let report = complete(&pcm, &CompletionOptions::default())
        .map_err(|e| CliError::from_completion(e, pcm.labels()))?;
    let pv = priorities(&report.completed)?;
    let wall_time = start.elapsed();

    let c = &report.completed;
    let mut max_log_error: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let err = (c.get(i, j).ln() - (weights[i] / weights[j]).ln()).abs();
            max_log_error = max_log_error.max(err);
        }
    }
    let kendall_tau = kendall_tau_b(&pv.weights, &weights).unwrap_or(f64::NAN);
    Ok(TrialResult {
        trial,
        n,
        missing_pairs: missing,
        max_log_error,
        kendall_tau,
        cr_after: report.consistency.cr,
        wall_time,
        completed: report.completed,
    })
}

/// Runs all trials in parallel and returns them in trial order. The first
/// failing trial (by index) is reported.
pub fn run_bench(spec: &BenchSpec) -> Result<Vec<TrialResult>, CliError> {
    spec.validate()?;
    let results: Vec<Result<TrialResult, CliError>> = (0..spec.trials)
        .into_par_iter()
        .map(|k| run_trial(spec, k))
        .collect();
    results.into_iter().collect()
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let m = s.len() / 2;
    if s.len() % 2 == 1 {
        s[m]
    } else {
        0.5 * (s[m - 1] + s[m])
    }
}

/// Per-trial rows followed by `mean` and `median` rows. Wall time is only
/// included when `timing` is set, since it is the one column that differs
/// between otherwise identical runs.
pub fn bench_csv(results: &[TrialResult], timing: bool) -> String {
    let mut out = String::from("trial,n,missing_pairs,max_log_error,kendall_tau,cr_after");
    if timing {
        out.push_str(",wall_time_ms");
    }
    out.push('\n');
    let ms = |r: &TrialResult| r.wall_time.as_secs_f64() * 1e3;
    for r in results {
        out.push_str(&format!(
            "{},{},{},{:.6e},{},{}",
            r.trial,
            r.n,
            r.missing_pairs,
            r.max_log_error,
            fixed(r.kendall_tau, 6),
            fixed(r.cr_after, 6)
        ));
        if timing {
            out.push_str(&format!(",{}", fixed(ms(r), 4)));
        }
        out.push('\n');
    }
    let column = |f: &dyn Fn(&TrialResult) -> f64| results.iter().map(f).collect::<Vec<f64>>();
    let n = column(&|r| r.n as f64);
    let missing = column(&|r| r.missing_pairs as f64);
    let err = column(&|r| r.max_log_error);
    let tau = column(&|r| r.kendall_tau);
    let cr = column(&|r| r.cr_after);
    let time = column(&|r| ms(r));
    for (name, agg) in [("mean", mean as fn(&[f64]) -> f64), ("median", median)] {
        out.push_str(&format!(
            "{name},{},{},{:.6e},{},{}",
            fixed(agg(&n), 2),
            fixed(agg(&missing), 2),
            agg(&err),
            fixed(agg(&tau), 6),
            fixed(agg(&cr), 6)
        ));
        if timing {
            out.push_str(&format!(",{}", fixed(agg(&time), 4)));
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct LadderReport {
    /// `(n, median wall time in seconds)` per rung.
    pub rungs: Vec<(usize, f64)>,
    /// Least-squares slope of `ln time` against `ln n`.
    pub slope: f64,
}

impl LadderReport {
    pub fn is_monotone(&self) -> bool {
        self.rungs.windows(2).all(|w| w[1].1 > w[0].1)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,median_wall_time_ms\n");
        for (n, t) in &self.rungs {
            out.push_str(&format!("{n},{}\n", fixed(t * 1e3, 6)));
        }
        out.push_str(&format!("# log-log slope: {}\n", fixed(self.slope, 3)));
        out
    }
}

/// Times the pipeline at each size of `sizes` with the rest of `spec`
/// unchanged. Trials run one at a time so that they do not compete for
/// cores; each trial's time is the best of `repeats` runs.
pub fn run_ladder(
    spec: &BenchSpec,
    sizes: &[usize],
    repeats: usize,
) -> Result<LadderReport, CliError> {
    let mut rungs = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let rung = BenchSpec {
            n: Param::Fixed(n),
            ..*spec
        };
        rung.validate()?;
        let mut times = Vec::with_capacity(spec.trials);
        for k in 0..spec.trials {
            let best = (0..repeats.max(1))
                .map(|_| run_trial(&rung, k).map(|r| r.wall_time.as_secs_f64()))
                .collect::<Result<Vec<f64>, CliError>>()?
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            times.push(best);
        }
        rungs.push((n, median(&times)));
    }
    let slope = log_log_slope(&rungs);
    Ok(LadderReport { rungs, slope })
}

fn log_log_slope(rungs: &[(usize, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = rungs
        .iter()
        .map(|&(n, t)| ((n as f64).ln(), t.max(f64::MIN_POSITIVE).ln()))
        .collect();
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx > 0.0 {
        sxy / sxx
    } else {
        f64::NAN
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: usize, missing: f64, sigma: f64) -> BenchSpec {
        BenchSpec {
            n: Param::Fixed(n),
            missing_fraction: Param::Fixed(missing),
            noise_sigma: sigma,
            trials: 8,
            seed: 42,
        }
    }

    #[test]
    fn params_parse() {
        assert_eq!("8".parse::<Param<usize>>(), Ok(Param::Fixed(8)));
        assert_eq!("4-12".parse::<Param<usize>>(), Ok(Param::Range(4, 12)));
        assert_eq!("0-0.4".parse::<Param<f64>>(), Ok(Param::Range(0.0, 0.4)));
        assert!("12-4".parse::<Param<usize>>().is_err());
        assert!("x".parse::<Param<f64>>().is_err());
    }

    #[test]
    fn noiseless_trials_recover_exactly() {
        for r in run_bench(&spec(9, 0.3, 0.0)).unwrap() {
            assert!(r.max_log_error <= 1e-8);
            assert_eq!(r.kendall_tau, 1.0);
            assert!(r.missing_pairs > 0);
        }
    }

    #[test]
    fn nothing_missing_is_identity() {
        for r in run_bench(&spec(6, 0.0, 0.0)).unwrap() {
            assert_eq!(r.missing_pairs, 0);
            assert!(r.max_log_error <= 1e-12);
        }
    }

    #[test]
    fn noise_shows_up_in_the_error() {
        let rs = run_bench(&spec(8, 0.2, 0.3)).unwrap();
        assert!(rs.iter().all(|r| r.max_log_error > 1e-3));
        assert!(rs.iter().all(|r| (-1.0..=1.0).contains(&r.kendall_tau)));
    }

    #[test]
    fn impossible_mask_is_a_mask_failure() {
        // 4 alternatives need 3 known pairs; 5 of 6 missing leaves 1.
        let err = run_bench(&spec(4, 0.9, 0.0)).unwrap_err();
        assert_eq!(err.exit_code(), 5);
    }

    #[test]
    fn invalid_specs_are_input_errors() {
        assert_eq!(run_bench(&spec(1, 0.1, 0.0)).unwrap_err().exit_code(), 2);
        assert_eq!(run_bench(&spec(5, 1.0, 0.0)).unwrap_err().exit_code(), 2);
        assert_eq!(run_bench(&spec(5, 0.1, -1.0)).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn csv_is_deterministic_and_ordered() {
        let s = BenchSpec {
            n: Param::Range(4, 12),
            missing_fraction: Param::Range(0.0, 0.4),
            trials: 32,
            ..spec(0, 0.0, 0.1)
        };
        let a = bench_csv(&run_bench(&s).unwrap(), false);
        let b = bench_csv(&run_bench(&s).unwrap(), false);
        assert_eq!(a, b);
        let lines: Vec<&str> = a.lines().collect();
        assert_eq!(lines.len(), 1 + 32 + 2);
        for (k, line) in lines[1..33].iter().enumerate() {
            assert!(line.starts_with(&format!("{k},")));
        }
        assert!(lines[33].starts_with("mean,"));
        assert!(lines[34].starts_with("median,"));
    }

    #[test]
    fn median_and_slope() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        let rungs = [(10, 1e-3), (20, 8e-3), (40, 64e-3)];
        assert!((log_log_slope(&rungs) - 3.0).abs() < 1e-12);
    }
}
