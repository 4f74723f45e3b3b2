//! System orderings and Kendall rank correlation between them.

use crate::{Error, Result};

/// Normal quantile used for the 95% confidence interval on tau.
const Z_95: f64 = 1.96;

/// Runs ordered best-first. Ties in the mean score are broken by ascending
/// run id so the order is total; `tied` records that a tie occurred so
/// reports can flag it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunRanking {
    order: Vec<usize>,
    tied: bool,
}

impl RunRanking {
    /// Run indices, best first.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Whether any two runs had exactly equal means.
    pub fn tied(&self) -> bool {
        self.tied
    }

    /// Number of runs ranked.
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Run ids in rank order, resolved against the id list the ranking was
    /// built from.
    pub fn ordered_ids<'a>(&self, run_ids: &'a [String]) -> Vec<&'a str> {
        self.order.iter().map(|&i| run_ids[i].as_str()).collect()
    }
}

/// Ranks runs by descending mean score; exact ties fall back to ascending
/// run id and set the tie flag.
pub fn rank_runs(run_ids: &[String], means: &[f64]) -> Result<RunRanking> {
    if run_ids.len() != means.len() {
        return Err(Error::InvalidData(format!(
            "{} run ids but {} means",
            run_ids.len(),
            means.len()
        )));
    }
    if run_ids.is_empty() {
        return Err(Error::InvalidData("cannot rank zero runs".into()));
    }
    if let Some(bad) = means.iter().find(|m| !m.is_finite()) {
        return Err(Error::NonFinite(format!("mean score {bad}")));
    }
    let mut order: Vec<usize> = (0..run_ids.len()).collect();
    order.sort_by(|&a, &b| {
        means[b]
            .total_cmp(&means[a])
            .then_with(|| run_ids[a].cmp(&run_ids[b]))
    });
    let tied = order.windows(2).any(|w| means[w[0]] == means[w[1]]);
    Ok(RunRanking { order, tied })
}

/// Kendall tau-a between two total orders over the same runs: the number of
/// concordant minus discordant pairs, divided by the number of pairs.
pub fn kendall_tau(a: &RunRanking, b: &RunRanking) -> Result<f64> {
    let n = a.len();
    if n != b.len() {
        return Err(Error::InvalidData(format!(
            "rankings cover {n} and {} runs",
            b.len()
        )));
    }
    if n < 2 {
        return Err(Error::InvalidData(
            "rank correlation requires at least 2 runs".into(),
        ));
    }
    let mut position_in_b = vec![0usize; n];
    for (pos, &run) in b.order.iter().enumerate() {
        if run >= n {
            return Err(Error::InvalidData(format!("run index {run} out of range")));
        }
        position_in_b[run] = pos;
    }
    // b's positions visited in a's order: every inversion is a discordant pair.
    let sequence: Vec<usize> = a.order.iter().map(|&run| position_in_b[run]).collect();
    let mut discordant = 0usize;
    for i in 0..n {
        for j in (i + 1)..n {
            if sequence[i] > sequence[j] {
                discordant += 1;
            }
        }
    }
    let pairs = n * (n - 1) / 2;
    Ok((pairs as f64 - 2.0 * discordant as f64) / pairs as f64)
}

/// 95% confidence interval for tau under the null-variance normal
/// approximation `var = 2(2n + 5) / (9 n (n - 1))`, clipped to `[-1, 1]`.
/// Requires at least 4 runs; below that the approximation is meaningless.
pub fn tau_ci(tau: f64, n: usize) -> Result<(f64, f64)> {
    if n < 4 {
        return Err(Error::InvalidData(format!(
            "confidence interval requires at least 4 runs, got {n}"
        )));
    }
    if !tau.is_finite() || !(-1.0..=1.0).contains(&tau) {
        return Err(Error::InvalidArgument(format!(
            "tau must lie in [-1, 1], got {tau}"
        )));
    }
    let variance = 2.0 * (2.0 * n as f64 + 5.0) / (9.0 * n as f64 * (n as f64 - 1.0));
    let half_width = Z_95 * variance.sqrt();
    Ok(((tau - half_width).max(-1.0), (tau + half_width).min(1.0)))
}
