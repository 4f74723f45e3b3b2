//! Independently coded textbook metric formulas and shared test data
//! generators. These deliberately avoid the library's continuation/
//! aggregation machinery so the two routes can be compared.
#![allow(dead_code)] // Each test binary uses its own subset of the helpers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Mean gain over the top `k` ranks.
pub fn textbook_precision(gains: &[f64], k: usize) -> f64 {
    gains.iter().take(k).sum::<f64>() / k as f64
}

/// Geometric rank-weighted gain: `(1 - p) * sum_i p^(i-1) * r_i`.
pub fn textbook_rbp(gains: &[f64], p: f64) -> f64 {
    gains
        .iter()
        .enumerate()
        .map(|(i, r)| p.powi(i as i32) * r)
        .sum::<f64>()
        * (1.0 - p)
}

/// Log-discounted cumulated gain over the top `k` ranks.
pub fn textbook_dcg(gains: &[f64], k: usize) -> f64 {
    gains
        .iter()
        .take(k)
        .enumerate()
        .map(|(i, r)| r / ((i + 2) as f64).log2())
        .sum()
}

/// Cascade expected reciprocal rank: `sum_i (1/i) r_i prod_{j<i} (1 - r_j)`.
pub fn textbook_err(gains: &[f64]) -> f64 {
    let mut continue_prob = 1.0;
    let mut total = 0.0;
    for (i, &r) in gains.iter().enumerate() {
        total += continue_prob * r / (i + 1) as f64;
        continue_prob *= 1.0 - r;
    }
    total
}

/// Average precision of a binary gain list (0 when nothing is relevant).
pub fn textbook_ap(gains: &[f64]) -> f64 {
    let relevant: f64 = gains.iter().sum();
    if relevant == 0.0 {
        return 0.0;
    }
    let mut seen = 0.0;
    let mut total = 0.0;
    for (i, &r) in gains.iter().enumerate() {
        seen += r;
        if r > 0.0 {
            total += seen / (i + 1) as f64;
        }
    }
    total / relevant
}

/// Graded gain values under the two level mappings with 4 grades.
pub fn mapped_gain_values() -> (Vec<f64>, Vec<f64>) {
    let linear = (0..=4).map(|x| x as f64 / 4.0).collect();
    let exponential = (0..=4).map(|x| (2f64.powi(x) - 1.0) / 16.0).collect();
    (linear, exponential)
}

/// `count` random gain vectors of the given depth, drawn from graded levels
/// mapped alternately through the linear and exponential schemes.
pub fn random_graded_gains(count: usize, depth: usize, seed: u64) -> Vec<Vec<f64>> {
    let (linear, exponential) = mapped_gain_values();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let palette = if i % 2 == 0 { &linear } else { &exponential };
            (0..depth)
                .map(|_| palette[rng.gen_range(0..palette.len())])
                .collect()
        })
        .collect()
}

/// `count` random gain vectors of the given depth with continuous values in
/// [0, 1), for checks where discrete gain levels would create tied means.
pub fn random_uniform_gains(count: usize, depth: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..depth).map(|_| rng.gen_range(0.0..1.0)).collect())
        .collect()
}

/// All binary gain vectors of the given depth.
pub fn all_binary_gains(depth: usize) -> Vec<Vec<f64>> {
    (0..(1usize << depth))
        .map(|bits| {
            (0..depth)
                .map(|i| if bits >> i & 1 == 1 { 1.0 } else { 0.0 })
                .collect()
        })
        .collect()
}
