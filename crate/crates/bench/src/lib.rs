//! Fixtures shared by the criterion benchmarks.

use ahpfill_core::synth::{
    missing_pair_count, perturbed_pcm, random_connected_mask, random_weights, trial_rng,
};
use ahpfill_core::IncompletePcm;

/// A consistent `n x n` instance with 30% of its pairs missing.
pub fn consistent_instance(n: usize, seed: u64) -> IncompletePcm {
    let mut rng = trial_rng(seed, n as u64);
    let weights = random_weights(&mut rng, n, 0.1, 10.0);
    let mask = random_connected_mask(&mut rng, n, missing_pair_count(n, 0.3), 1000)
        .expect("30% missing leaves a connected mask");
    perturbed_pcm(&mut rng, &weights, &mask, 0.0).expect("valid instance")
}
