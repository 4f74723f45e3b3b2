//! Randomized Tukey HSD: a permutation test for all pairwise column
//! differences with a max-statistic null, so the achieved significance
//! levels are familywise-corrected.

use rand::seq::SliceRandom;

use crate::exec::map_indexed;
use crate::rng::{trial_rng, StreamDomain};
use crate::{Error, Result};

/// One column pair: observed absolute mean difference and its achieved
/// significance level.
#[derive(Debug, Clone, PartialEq)]
pub struct AslEntry {
    /// First column index (`a < b`).
    pub a: usize,
    /// Second column index.
    pub b: usize,
    /// Observed `|mean(col a) - mean(col b)|`.
    pub observed: f64,
    /// Fraction of permutation trials whose max-difference statistic
    /// reached the observed difference.
    pub asl: f64,
}

/// Achieved significance levels for every column pair of one matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct AslTable {
    labels: Vec<String>,
    entries: Vec<AslEntry>,
    trials: usize,
    seed: u64,
}

impl AslTable {
    /// Column labels (runs or metrics).
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Entries in pair order `(0,1), (0,2), ..., (1,2), ...`.
    pub fn entries(&self) -> &[AslEntry] {
        &self.entries
    }

    /// Entry for the pair `{a, b}`, in either order.
    pub fn entry(&self, a: usize, b: usize) -> Option<&AslEntry> {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let n = self.labels.len();
        if hi >= n || lo == hi {
            return None;
        }
        let index = lo * (2 * n - lo - 1) / 2 + (hi - lo - 1);
        self.entries.get(index)
    }

    pub fn trials(&self) -> usize {
        self.trials
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Runs the randomized Tukey HSD test on a row-major `rows x columns`
/// matrix whose rows are paired observations (topics, or resampling trials).
///
/// Each trial independently permutes the entries within every row, and its
/// statistic is the largest absolute difference between column means; the
/// ASL of a pair is the fraction of trial statistics at or above the pair's
/// observed difference. Trials draw from per-trial random substreams, so the
/// table depends only on `(values, trials, seed)`.
pub fn randomized_tukey_hsd(
    labels: &[String],
    values: &[f64],
    trials: usize,
    seed: u64,
) -> Result<AslTable> {
    let n_cols = labels.len();
    if n_cols < 2 {
        return Err(Error::InvalidData(
            "the test requires at least 2 columns".into(),
        ));
    }
    if values.is_empty() || !values.len().is_multiple_of(n_cols) {
        return Err(Error::InvalidData(format!(
            "{} values do not form rows of {n_cols} columns",
            values.len()
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("matrix cell {bad}")));
    }
    let n_rows = values.len() / n_cols;

    let observed_means = column_means(values, n_rows, n_cols);
    let mut stats: Vec<f64> = map_indexed(trials, |trial| {
        let mut rng = trial_rng(seed, StreamDomain::HsdPermutation, trial as u64);
        let mut sums = vec![0.0; n_cols];
        let mut scratch = vec![0.0; n_cols];
        for row in values.chunks_exact(n_cols) {
            scratch.copy_from_slice(row);
            scratch.shuffle(&mut rng);
            for (sum, v) in sums.iter_mut().zip(&scratch) {
                *sum += v;
            }
        }
        let lo = sums.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = sums.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (hi - lo) / n_rows as f64
    });
    stats.sort_by(f64::total_cmp);

    let mut entries = Vec::with_capacity(n_cols * (n_cols - 1) / 2);
    for a in 0..n_cols {
        for b in (a + 1)..n_cols {
            let observed = (observed_means[a] - observed_means[b]).abs();
            let below = stats.partition_point(|s| *s < observed);
            entries.push(AslEntry {
                a,
                b,
                observed,
                asl: (trials - below) as f64 / trials as f64,
            });
        }
    }
    Ok(AslTable {
        labels: labels.to_vec(),
        entries,
        trials,
        seed,
    })
}

fn column_means(values: &[f64], n_rows: usize, n_cols: usize) -> Vec<f64> {
    let mut sums = vec![0.0; n_cols];
    for row in values.chunks_exact(n_cols) {
        for (sum, v) in sums.iter_mut().zip(row) {
            *sum += v;
        }
    }
    sums.into_iter().map(|s| s / n_rows as f64).collect()
}
