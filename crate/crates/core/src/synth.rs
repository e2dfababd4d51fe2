//! Seeded synthetic instances: consistent (optionally perturbed) comparison
//! matrices with random connected missing patterns.
//!
//! All randomness comes from ChaCha8, which produces the same stream on
//! every platform for a given seed and stream number.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

use crate::pcm::{default_labels, IncompletePcm, ValidateOptions};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthError {
    #[error("could not draw a connected mask for n = {n} with {missing} missing pairs in {retries} attempts")]
    MaskUnavailable {
        n: usize,
        missing: usize,
        retries: usize,
    },
    #[error("invalid synthetic parameter: {0}")]
    InvalidParameter(String),
}

/// Deterministic generator for trial `stream` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `n` weights drawn uniformly from `[lo, hi)`.
pub fn random_weights<R: Rng + ?Sized>(rng: &mut R, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(lo..hi)).collect()
}

/// Number of missing pairs for a fraction of the `n (n - 1) / 2` pairs.
pub fn missing_pair_count(n: usize, missing_fraction: f64) -> usize {
    let pairs = n * (n.saturating_sub(1)) / 2;
    ((missing_fraction * pairs as f64).round() as usize).min(pairs)
}

/// Draws `missing` distinct off-diagonal pairs `(i, j)`, `i < j`, uniformly,
/// redrawing until the remaining known pairs connect all `n` alternatives.
pub fn random_connected_mask<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    missing: usize,
    max_retries: usize,
) -> Result<Vec<(usize, usize)>, SynthError> {
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let fail = SynthError::MaskUnavailable {
        n,
        missing,
        retries: max_retries,
    };
    if missing > pairs.len() || pairs.len() - missing + 1 < n {
        return Err(fail);
    }
    for _ in 0..max_retries {
        pairs.shuffle(rng);
        let (dropped, kept) = pairs.split_at(missing);
        if connects(n, kept) {
            let mut mask = dropped.to_vec();
            mask.sort_unstable();
            return Ok(mask);
        }
    }
    Err(fail)
}

/// Builds `m_ij = (w_i / w_j) exp(eps_ij)` with `eps_ij ~ N(0, sigma^2)` on
/// the upper triangle, exact reciprocals below, and the masked pairs removed.
/// Noise is drawn for every pair in row-major order, masked or not.
pub fn perturbed_pcm<R: Rng + ?Sized>(
    rng: &mut R,
    weights: &[f64],
    mask: &[(usize, usize)],
    sigma: f64,
) -> Result<IncompletePcm, SynthError> {
    let n = weights.len();
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(SynthError::InvalidParameter(format!("sigma = {sigma}")));
    }
    let noise = Normal::new(0.0, sigma).map_err(|e| SynthError::InvalidParameter(e.to_string()))?;
    let mut grid = vec![vec![None; n]; n];
    for i in 0..n {
        grid[i][i] = Some(1.0);
        for j in i + 1..n {
            let eps = if sigma > 0.0 { noise.sample(rng) } else { 0.0 };
            let v = weights[i] / weights[j] * eps.exp();
            grid[i][j] = Some(v);
            grid[j][i] = Some(1.0 / v);
        }
    }
    for &(i, j) in mask {
        grid[i][j] = None;
        grid[j][i] = None;
    }
    IncompletePcm::validate(&grid, default_labels(n), &ValidateOptions::default())
        .map_err(|e| SynthError::InvalidParameter(e.to_string()))
}

fn connects(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut groups = n;
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            groups -= 1;
        }
    }
    groups <= 1
}
