//! Offline evaluation of ranked retrieval runs, built on the C/W/L/A
//! decomposition: a *browsing model* supplies the probability that a user
//! continues past each rank, a *gain aggregation* supplies the utility the
//! user reports when they stop, and a metric is the expected utility over
//! the induced stopping distribution.
//!
//! The crate covers the full pipeline:
//!
//! * parsing TREC qrels/run files and assembling per-rank gain vectors
//!   ([`trec`], [`gain`]),
//! * six browsing models crossed with seven aggregations, scored per
//!   `(topic, run)` cell ([`model`], [`agg`], [`metric`], [`matrix`]),
//! * meta-evaluation of the resulting metrics: ranking similarity across
//!   aggregations ([`similarity`]), split-half ranking consistency
//!   ([`consistency`]), and discriminative power via a randomized Tukey HSD
//!   permutation test ([`hsd`], [`power`]).
//!
//! Every randomized routine takes an explicit seed and draws from per-trial
//! random substreams ([`rng`]), so results are reproducible bit-for-bit —
//! including across worker counts when the `parallel` feature (enabled by
//! default) runs trials and matrix cells on multiple threads.
//!
//! ```
//! use cwla::{
//!     assemble_gains, parse_qrels, parse_run, score_matrix, GainMapping, GainScheme,
//!     MetricSpec, RunSet, TruncationPolicy,
//! };
//!
//! let qrels = parse_qrels("q1 0 d1 2\nq1 0 d2 0\nq1 0 d3 1\n")?;
//! let run = parse_run("q1 Q0 d1 1 9.5 sysA\nq1 Q0 d3 2 8.0 sysA\n")?;
//! let runs = RunSet::new(vec![run])?;
//! let mapping = GainMapping::new(GainScheme::Linear, 2)?;
//! let (gains, _report) = assemble_gains(&runs, &qrels, &mapping, 10)?;
//!
//! let spec = MetricSpec::parse("rbp@0.8+erg", 10, TruncationPolicy::StopAtDepth, mapping.scheme())?;
//! let scores = score_matrix(&gains, &spec)?;
//! assert!(scores.value(0, 0) > 0.0);
//! # Ok::<(), cwla::Error>(())
//! ```

pub mod agg;
pub mod consistency;
mod error;
mod exec;
pub mod gain;
pub mod hsd;
pub mod kendall;
pub mod matrix;
pub mod metric;
pub mod model;
pub mod power;
pub mod report;
pub mod rng;
pub mod similarity;
pub mod trec;

pub use agg::{aggregate, Aggregation, DEFAULT_PE_BETA};
pub use consistency::{
    consistency_matrix, consistency_significance, consistency_trials, topic_split,
    ConsistencyMatrix, ConsistencySummary, ConsistencySummaryRow, ConsistencyTrials,
};
pub use error::{Error, Result};
pub use gain::{assemble_gains, AssemblyReport, GainMapping, GainScheme, GainTable, GainVector};
pub use hsd::{randomized_tukey_hsd, AslEntry, AslTable};
pub use kendall::{kendall_tau, rank_runs, tau_ci, RunRanking};
pub use matrix::{score_matrix, ScoreMatrix};
pub use metric::{
    combination_grid, parse_aggregation, parse_model, score, valid_aggregations, MetricSpec,
};
pub use model::{
    continuation, last_probabilities, v_plus, weights, BrowsingModel, TruncationPolicy,
};
pub use power::{asl_curve, discriminative_power};
pub use similarity::{similarity_grid, SimilarityCell, SimilarityGrid};
pub use trec::{parse_qrels, parse_run, Qrels, Run, RunSet};
