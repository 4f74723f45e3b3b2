//! Gain aggregations: the utility `A(i)` a user walks away with when rank
//! `i` turns out to be the last one inspected.

use crate::gain::GainVector;
use crate::{Error, Result};

/// Default blend weight for [`Aggregation::Pe`].
pub const DEFAULT_PE_BETA: f64 = 0.5;

/// Aggregation of the gains seen through the stopping rank.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Aggregation {
    /// Expected rate of gain: cumulated gain divided by the expected number
    /// of inspected ranks `V+`.
    Erg,
    /// Expected total gain: plain cumulated gain.
    Etg,
    /// Average gain over the inspected ranks.
    Avg,
    /// Peak gain seen so far.
    Max,
    /// Gain at the stopping rank itself.
    Fin,
    /// Peak/final blend: `beta * max + (1 - beta) * fin`.
    Pe { beta: f64 },
    /// Reciprocal of the stopping rank, `1 / i`, independent of the gains.
    Err,
}

impl Aggregation {
    /// Validates aggregation parameters.
    pub fn validate(&self) -> Result<()> {
        if let Aggregation::Pe { beta } = *self {
            if !beta.is_finite() || !(0.0..=1.0).contains(&beta) {
                return Err(Error::InvalidSpec(format!(
                    "pe requires a blend weight 0 <= beta <= 1, got {beta}"
                )));
            }
        }
        Ok(())
    }

    /// Lower-case aggregation name as used in spec labels.
    pub fn name(&self) -> &'static str {
        match self {
            Aggregation::Erg => "erg",
            Aggregation::Etg => "etg",
            Aggregation::Avg => "avg",
            Aggregation::Max => "max",
            Aggregation::Fin => "fin",
            Aggregation::Pe { .. } => "pe",
            Aggregation::Err => "err",
        }
    }
}

/// Aggregated utility at stopping rank `i` (1-based). `v_plus` is the
/// expected inspection count used by [`Aggregation::Erg`]; it must be at
/// least 1 (its minimum over every model, since rank 1 is always inspected).
pub fn aggregate(agg: &Aggregation, gains: &GainVector, i: usize, v_plus: f64) -> Result<f64> {
    agg.validate()?;
    if i < 1 || i > gains.depth() {
        return Err(Error::InvalidArgument(format!(
            "rank {i} outside 1..={}",
            gains.depth()
        )));
    }
    if !v_plus.is_finite() || v_plus < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "expected inspection count v_plus must be >= 1, got {v_plus}"
        )));
    }
    let seen = &gains.as_slice()[..i];
    Ok(match *agg {
        Aggregation::Erg => seen.iter().sum::<f64>() / v_plus,
        Aggregation::Etg => seen.iter().sum(),
        Aggregation::Avg => seen.iter().sum::<f64>() / i as f64,
        Aggregation::Max => seen.iter().copied().fold(0.0, f64::max),
        Aggregation::Fin => seen[i - 1],
        Aggregation::Pe { beta } => {
            let max = seen.iter().copied().fold(0.0, f64::max);
            beta * max + (1.0 - beta) * seen[i - 1]
        }
        Aggregation::Err => 1.0 / i as f64,
    })
}
