//! User browsing models, expressed as continuation probabilities.
//!
//! A browsing model assigns each rank `i` a probability `C(i)` that a user
//! who has just inspected rank `i` continues to rank `i + 1`. Everything
//! else — stopping distribution, rank weights, expected inspection count —
//! derives from `C`:
//!
//! * last probability: `L(i) = (1 - C(i)) * prod_{j<i} C(j)`,
//! * expected inspections: `V+ = sum_i prod_{j<i} C(j)` (the empty product
//!   is 1, so `V+ >= 1`),
//! * weights: `W(i) = prod_{j<i} C(j) / V+`, which sum to 1 by construction.
//!
//! Ranks are 1-based throughout the public API.

use crate::gain::GainVector;
use crate::{Error, Result};

/// How evaluation treats the last rank of the horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TruncationPolicy {
    /// Force `C(depth) = 0`: the user certainly stops at the horizon, so the
    /// stopping probabilities sum to exactly 1.
    StopAtDepth,
    /// Leave `C(depth)` as the model defines it; stopping mass beyond the
    /// horizon is discarded, so the probabilities sum to at most 1.
    OpenTail,
}

impl std::str::FromStr for TruncationPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stop" => Ok(TruncationPolicy::StopAtDepth),
            "open" => Ok(TruncationPolicy::OpenTail),
            other => Err(Error::InvalidArgument(format!(
                "unknown truncation policy {other:?} (expected \"stop\" or \"open\")"
            ))),
        }
    }
}

impl TruncationPolicy {
    pub fn name(&self) -> &'static str {
        match self {
            TruncationPolicy::StopAtDepth => "stop",
            TruncationPolicy::OpenTail => "open",
        }
    }
}

/// Browsing models: each defines the continuation probability `C(i)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BrowsingModel {
    /// Inspect exactly the top `k` ranks: `C(i) = 1` below rank `k`, then 0.
    Precision { k: usize },
    /// Continue with `log2(i + 1) / log2(i + 2)` below rank `k`, then 0;
    /// the implied weights decay like the classic log-discount.
    Dcg { k: usize },
    /// Continue with constant probability `p`.
    Rbp { p: f64 },
    /// Adaptive persistence with target gain `t`: continuation
    /// `((i - 1 + t + t_i) / (i + t + t_i))^2` where `t_i` is the target
    /// minus the gain accumulated through rank `i`. Requires `t >= 1/4`:
    /// the numerator is at least `2t - 1`, so any smaller target lets the
    /// squared ratio exceed 1 once enough gain has been collected.
    Inst { t: f64 },
    /// Continue in proportion to the share of reciprocal-rank gain still
    /// ahead: `C(i) = (sum_{j>i} r_j / j) / (sum_{j>=i} r_j / j)`, with
    /// `0/0` taken as 0. Sums run to the gain-vector depth.
    Ap,
    /// Stop in proportion to the gain just seen: `C(i) = 1 - r_i`.
    Err,
}

impl BrowsingModel {
    /// Validates model parameters.
    pub fn validate(&self) -> Result<()> {
        match *self {
            BrowsingModel::Precision { k } | BrowsingModel::Dcg { k } => {
                if k == 0 {
                    return Err(Error::InvalidSpec(format!(
                        "{} requires a cutoff k >= 1",
                        self.name()
                    )));
                }
            }
            BrowsingModel::Rbp { p } => {
                if !p.is_finite() || !(0.0..1.0).contains(&p) || p == 0.0 {
                    return Err(Error::InvalidSpec(format!(
                        "rbp requires persistence 0 < p < 1, got {p}"
                    )));
                }
            }
            BrowsingModel::Inst { t } => {
                if !t.is_finite() || t < 0.25 {
                    return Err(Error::InvalidSpec(format!(
                        "inst requires a target gain t >= 0.25 (smaller targets \
                         push the continuation probability above 1), got {t}"
                    )));
                }
            }
            BrowsingModel::Ap | BrowsingModel::Err => {}
        }
        Ok(())
    }

    /// Lower-case model name as used in spec labels.
    pub fn name(&self) -> &'static str {
        match self {
            BrowsingModel::Precision { .. } => "precision",
            BrowsingModel::Dcg { .. } => "dcg",
            BrowsingModel::Rbp { .. } => "rbp",
            BrowsingModel::Inst { .. } => "inst",
            BrowsingModel::Ap => "ap",
            BrowsingModel::Err => "err",
        }
    }

    /// Whether `C` depends on the gains (adaptive) or only on the rank.
    pub fn is_adaptive(&self) -> bool {
        matches!(
            self,
            BrowsingModel::Inst { .. } | BrowsingModel::Ap | BrowsingModel::Err
        )
    }
}

/// Continuation probability `C(i)` (1-based rank) for one model and one gain
/// vector. Fails when `i` is outside `1..=gains.depth()` or the model
/// parameters are invalid.
pub fn continuation(model: &BrowsingModel, i: usize, gains: &GainVector) -> Result<f64> {
    model.validate()?;
    if i < 1 || i > gains.depth() {
        return Err(Error::InvalidArgument(format!(
            "rank {i} outside 1..={}",
            gains.depth()
        )));
    }
    Ok(continuation_unchecked(model, i, gains.as_slice()))
}

fn continuation_unchecked(model: &BrowsingModel, i: usize, gains: &[f64]) -> f64 {
    match *model {
        BrowsingModel::Precision { k } => {
            if i < k {
                1.0
            } else {
                0.0
            }
        }
        BrowsingModel::Dcg { k } => {
            if i < k {
                ((i + 1) as f64).log2() / ((i + 2) as f64).log2()
            } else {
                0.0
            }
        }
        BrowsingModel::Rbp { p } => p,
        BrowsingModel::Inst { t } => {
            let collected: f64 = gains[..i].iter().sum();
            let t_i = t - collected;
            let num = (i - 1) as f64 + t + t_i;
            let den = i as f64 + t + t_i;
            (num / den).powi(2)
        }
        BrowsingModel::Ap => {
            let ahead: f64 = gains
                .iter()
                .enumerate()
                .skip(i)
                .map(|(j, r)| r / (j + 1) as f64)
                .sum();
            let from_here = ahead + gains[i - 1] / i as f64;
            if from_here == 0.0 {
                0.0
            } else {
                ahead / from_here
            }
        }
        BrowsingModel::Err => 1.0 - gains[i - 1],
    }
}

/// All continuation probabilities for ranks `1..=depth`, with the truncation
/// policy applied to the final rank. Shared by the probability, weight, and
/// scoring routines so they agree exactly.
pub(crate) fn continuation_profile(
    model: &BrowsingModel,
    gains: &GainVector,
    depth: usize,
    truncation: TruncationPolicy,
) -> Result<Vec<f64>> {
    model.validate()?;
    if depth < 1 || depth > gains.depth() {
        return Err(Error::InvalidArgument(format!(
            "depth {depth} outside 1..={}",
            gains.depth()
        )));
    }
    let slice = gains.as_slice();
    let mut c: Vec<f64> = match *model {
        // AP needs suffix sums; computing them once keeps the profile O(depth).
        BrowsingModel::Ap => {
            let mut from_here = vec![0.0; gains.depth() + 1];
            for j in (0..gains.depth()).rev() {
                from_here[j] = from_here[j + 1] + slice[j] / (j + 1) as f64;
            }
            (1..=depth)
                .map(|i| {
                    if from_here[i - 1] == 0.0 {
                        0.0
                    } else {
                        from_here[i] / from_here[i - 1]
                    }
                })
                .collect()
        }
        BrowsingModel::Inst { t } => {
            let mut collected = 0.0;
            (1..=depth)
                .map(|i| {
                    collected += slice[i - 1];
                    let t_i = t - collected;
                    let num = (i - 1) as f64 + t + t_i;
                    let den = i as f64 + t + t_i;
                    (num / den).powi(2)
                })
                .collect()
        }
        _ => (1..=depth)
            .map(|i| continuation_unchecked(model, i, slice))
            .collect(),
    };
    if truncation == TruncationPolicy::StopAtDepth {
        c[depth - 1] = 0.0;
    }
    for (idx, &value) in c.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFinite(format!(
                "continuation probability at rank {} is {value}",
                idx + 1
            )));
        }
    }
    Ok(c)
}

/// Products `prod_{j<i} C(j)` for `i = 1..=depth`; the probability that the
/// user reaches rank `i` at all. `P(1) = 1`.
pub(crate) fn reach_probabilities(c: &[f64]) -> Vec<f64> {
    let mut reach = Vec::with_capacity(c.len());
    let mut product = 1.0;
    for &ci in c {
        reach.push(product);
        product *= ci;
    }
    reach
}

/// Stopping distribution `L(i) = (1 - C(i)) * prod_{j<i} C(j)` over ranks
/// `1..=depth`. Under [`TruncationPolicy::StopAtDepth`] the entries sum to
/// exactly 1; under [`TruncationPolicy::OpenTail`] they sum to at most 1.
pub fn last_probabilities(
    model: &BrowsingModel,
    gains: &GainVector,
    depth: usize,
    truncation: TruncationPolicy,
) -> Result<Vec<f64>> {
    let c = continuation_profile(model, gains, depth, truncation)?;
    let reach = reach_probabilities(&c);
    Ok(c.iter()
        .zip(&reach)
        .map(|(&ci, &pi)| (1.0 - ci) * pi)
        .collect())
}

/// Expected number of inspected ranks, `V+ = sum_{i<=depth} prod_{j<i} C(j)`.
/// Always at least 1, since the first rank is always inspected.
pub fn v_plus(
    model: &BrowsingModel,
    gains: &GainVector,
    depth: usize,
    truncation: TruncationPolicy,
) -> Result<f64> {
    let c = continuation_profile(model, gains, depth, truncation)?;
    let total: f64 = reach_probabilities(&c).iter().sum();
    if !total.is_finite() {
        return Err(Error::NonFinite("expected inspection count".into()));
    }
    Ok(total)
}

/// Rank weights `W(i) = prod_{j<i} C(j) / V+`; they sum to 1 by construction.
pub fn weights(
    model: &BrowsingModel,
    gains: &GainVector,
    depth: usize,
    truncation: TruncationPolicy,
) -> Result<Vec<f64>> {
    let c = continuation_profile(model, gains, depth, truncation)?;
    let reach = reach_probabilities(&c);
    let total: f64 = reach.iter().sum();
    if !total.is_finite() || total <= 0.0 {
        return Err(Error::NonFinite("expected inspection count".into()));
    }
    Ok(reach.iter().map(|&p| p / total).collect())
}
