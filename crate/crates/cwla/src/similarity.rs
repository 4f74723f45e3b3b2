//! System-ranking similarity: how closely different aggregations (or any
//! labeled score matrices over one collection) agree on the run ordering.

use crate::kendall::{kendall_tau, rank_runs, tau_ci};
use crate::matrix::ScoreMatrix;
use crate::{Error, Result};

/// One cell of the similarity grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityCell {
    pub tau: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Pairwise Kendall tau (with confidence intervals) between the run
/// rankings induced by each labeled score matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityGrid {
    labels: Vec<String>,
    cells: Vec<SimilarityCell>,
    tie_flags: Vec<bool>,
}

impl SimilarityGrid {
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Cell at `(row, col)`; the grid is symmetric with a unit diagonal.
    pub fn cell(&self, row: usize, col: usize) -> SimilarityCell {
        self.cells[row * self.labels.len() + col]
    }

    /// Whether the ranking under each label contained an exact tie.
    pub fn tie_flags(&self) -> &[bool] {
        &self.tie_flags
    }
}

/// Builds the similarity grid for two or more labeled score matrices over
/// the same collection. Rankings use the mean score over all topics; the
/// interval half-width uses the null-variance normal approximation, so at
/// least 4 runs are required.
pub fn similarity_grid(entries: &[(String, ScoreMatrix)]) -> Result<SimilarityGrid> {
    if entries.len() < 2 {
        return Err(Error::InvalidData(
            "similarity requires at least 2 score matrices".into(),
        ));
    }
    let (_, reference) = &entries[0];
    let mut labels = Vec::with_capacity(entries.len());
    for (label, matrix) in entries {
        if matrix.topic_ids() != reference.topic_ids() || matrix.run_ids() != reference.run_ids() {
            return Err(Error::InvalidData(format!(
                "matrix {label:?} does not cover the same collection as {:?}",
                entries[0].0
            )));
        }
        if labels.iter().any(|l| l == label) {
            return Err(Error::InvalidData(format!("duplicate label {label:?}")));
        }
        labels.push(label.clone());
    }
    let n_runs = reference.n_runs();
    let rankings: Vec<_> = entries
        .iter()
        .map(|(_, matrix)| rank_runs(matrix.run_ids(), &matrix.grand_means()))
        .collect::<Result<_>>()?;
    let m = entries.len();
    let mut cells = Vec::with_capacity(m * m);
    for a in 0..m {
        for b in 0..m {
            let tau = kendall_tau(&rankings[a], &rankings[b])?;
            let (ci_low, ci_high) = tau_ci(tau, n_runs)?;
            cells.push(SimilarityCell {
                tau,
                ci_low,
                ci_high,
            });
        }
    }
    Ok(SimilarityGrid {
        labels,
        cells,
        tie_flags: rankings.iter().map(|r| r.tied()).collect(),
    })
}
