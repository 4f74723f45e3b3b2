//! System-ranking consistency: how similarly a metric ranks systems on two
//! disjoint random halves of the topic set, repeated over many trials.

use rand::Rng;

use crate::exec::map_indexed;
use crate::hsd::randomized_tukey_hsd;
use crate::kendall::{kendall_tau, rank_runs};
use crate::matrix::ScoreMatrix;
use crate::rng::{trial_rng, StreamDomain};
use crate::{Error, Result};

/// Splits topic indices `0..n_topics` into two disjoint halves for one
/// trial. The first half holds `n_topics / 2` topics (truncating division);
/// the rest go to the second half. Both halves come back sorted.
///
/// The split is a pure function of `(seed, trial, n_topics)`, so every
/// metric evaluated under the same seed sees identical splits at each trial.
pub fn topic_split(seed: u64, trial: u64, n_topics: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    if n_topics < 2 {
        return Err(Error::InvalidArgument(format!(
            "splitting requires at least 2 topics, got {n_topics}"
        )));
    }
    let half = n_topics / 2;
    let mut indices: Vec<usize> = (0..n_topics).collect();
    let mut rng = trial_rng(seed, StreamDomain::ConsistencySplit, trial);
    for i in 0..half {
        let j = rng.gen_range(i..n_topics);
        indices.swap(i, j);
    }
    let mut first = indices[..half].to_vec();
    let mut second = indices[half..].to_vec();
    first.sort_unstable();
    second.sort_unstable();
    Ok((first, second))
}

/// Per-trial rank correlations for one metric.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyTrials {
    /// Kendall tau between the two half rankings, one entry per trial.
    pub taus: Vec<f64>,
    /// Number of trials in which either half ranking contained an exact tie
    /// (broken by run id and flagged rather than hidden).
    pub tie_trials: usize,
}

/// Runs `b` consistency trials on one score matrix: each trial splits the
/// topics in half, ranks the runs by mean score on each half, and records
/// the Kendall tau between the two rankings.
pub fn consistency_trials(matrix: &ScoreMatrix, b: usize, seed: u64) -> Result<ConsistencyTrials> {
    if b == 0 {
        return Err(Error::InvalidArgument(
            "trial count must be at least 1".into(),
        ));
    }
    if matrix.n_runs() < 2 {
        return Err(Error::InvalidData(
            "consistency requires at least 2 runs".into(),
        ));
    }
    if matrix.n_topics() < 2 {
        return Err(Error::InvalidData(
            "consistency requires at least 2 topics".into(),
        ));
    }
    let results = map_indexed(b, |trial| -> Result<(f64, bool)> {
        let (first, second) = topic_split(seed, trial as u64, matrix.n_topics())?;
        let ranking_a = rank_runs(matrix.run_ids(), &matrix.column_means(&first)?)?;
        let ranking_b = rank_runs(matrix.run_ids(), &matrix.column_means(&second)?)?;
        let tau = kendall_tau(&ranking_a, &ranking_b)?;
        Ok((tau, ranking_a.tied() || ranking_b.tied()))
    });
    let mut taus = Vec::with_capacity(b);
    let mut tie_trials = 0;
    for result in results {
        let (tau, tied) = result?;
        taus.push(tau);
        tie_trials += usize::from(tied);
    }
    Ok(ConsistencyTrials { taus, tie_trials })
}

/// Trial-by-metric tau matrix: every metric evaluated over the same trials,
/// with identical topic splits at each trial.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyMatrix {
    metric_labels: Vec<String>,
    taus: Vec<f64>,
    b: usize,
    tie_trials: Vec<usize>,
    seed: u64,
}

impl ConsistencyMatrix {
    pub fn metric_labels(&self) -> &[String] {
        &self.metric_labels
    }

    /// Number of trials (rows).
    pub fn b(&self) -> usize {
        self.b
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Tau of `metric` at `trial`.
    pub fn tau(&self, trial: usize, metric: usize) -> f64 {
        self.taus[trial * self.metric_labels.len() + metric]
    }

    /// Row-major `b x metrics` tau values.
    pub fn values(&self) -> &[f64] {
        &self.taus
    }

    /// Tie-affected trial count per metric.
    pub fn tie_trials(&self) -> &[usize] {
        &self.tie_trials
    }

    /// Mean tau per metric over all trials.
    pub fn mean_taus(&self) -> Vec<f64> {
        let m = self.metric_labels.len();
        let mut sums = vec![0.0; m];
        for row in self.taus.chunks_exact(m) {
            for (sum, tau) in sums.iter_mut().zip(row) {
                *sum += tau;
            }
        }
        sums.into_iter().map(|s| s / self.b as f64).collect()
    }
}

/// Runs the consistency procedure for several metrics over one collection.
/// All matrices must cover identical topic and run sets; the same seed then
/// guarantees every metric sees the same topic split at each trial, so the
/// columns are paired observations.
pub fn consistency_matrix(
    matrices: &[ScoreMatrix],
    b: usize,
    seed: u64,
) -> Result<ConsistencyMatrix> {
    if matrices.is_empty() {
        return Err(Error::InvalidData("no score matrices given".into()));
    }
    let reference = &matrices[0];
    let mut labels = Vec::with_capacity(matrices.len());
    for matrix in matrices {
        if matrix.topic_ids() != reference.topic_ids() {
            return Err(Error::InvalidData(format!(
                "metric {} covers different topics than {}",
                matrix.metric(),
                reference.metric()
            )));
        }
        if matrix.run_ids() != reference.run_ids() {
            return Err(Error::InvalidData(format!(
                "metric {} covers different runs than {}",
                matrix.metric(),
                reference.metric()
            )));
        }
        labels.push(matrix.metric().to_string());
    }
    let columns: Vec<ConsistencyTrials> = matrices
        .iter()
        .map(|matrix| consistency_trials(matrix, b, seed))
        .collect::<Result<_>>()?;
    let m = matrices.len();
    let mut taus = vec![0.0; b * m];
    for (metric, column) in columns.iter().enumerate() {
        for (trial, &tau) in column.taus.iter().enumerate() {
            taus[trial * m + metric] = tau;
        }
    }
    Ok(ConsistencyMatrix {
        metric_labels: labels,
        taus,
        b,
        tie_trials: columns.into_iter().map(|c| c.tie_trials).collect(),
        seed,
    })
}

/// One row of the consistency summary.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencySummaryRow {
    pub metric: String,
    pub mean_tau: f64,
    /// How many other metrics this one significantly outperforms.
    pub outperforms: usize,
    /// Trials in which a half ranking contained an exact tie.
    pub tie_trials: usize,
}

/// Consistency summary: metrics ordered by mean tau, best first.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencySummary {
    pub rows: Vec<ConsistencySummaryRow>,
}

/// Assesses which mean-tau differences are significant, treating the trial
/// rows of the consistency matrix as paired observations under a randomized
/// Tukey HSD test. A metric "outperforms" another when their ASL is below
/// `alpha` and its mean tau is strictly higher.
pub fn consistency_significance(
    matrix: &ConsistencyMatrix,
    trials: usize,
    seed: u64,
    alpha: f64,
) -> Result<ConsistencySummary> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "alpha must lie strictly between 0 and 1, got {alpha}"
        )));
    }
    let m = matrix.metric_labels().len();
    let means = matrix.mean_taus();
    let mut outperforms = vec![0usize; m];
    if m >= 2 {
        let table = randomized_tukey_hsd(matrix.metric_labels(), matrix.values(), trials, seed)?;
        for entry in table.entries() {
            if entry.asl < alpha {
                if means[entry.a] > means[entry.b] {
                    outperforms[entry.a] += 1;
                } else if means[entry.b] > means[entry.a] {
                    outperforms[entry.b] += 1;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| {
        means[b]
            .total_cmp(&means[a])
            .then_with(|| matrix.metric_labels()[a].cmp(&matrix.metric_labels()[b]))
    });
    Ok(ConsistencySummary {
        rows: order
            .into_iter()
            .map(|i| ConsistencySummaryRow {
                metric: matrix.metric_labels()[i].clone(),
                mean_tau: means[i],
                outperforms: outperforms[i],
                tie_trials: matrix.tie_trials()[i],
            })
            .collect(),
    })
}
