//! Discriminative power: how many run pairs a metric separates at a given
//! significance level, and the full ASL curve behind that count.

use crate::hsd::AslTable;
use crate::{Error, Result};

/// ASL curve: pair ASLs sorted ascending, paired with a 1-based position.
/// Ties keep the table's pair order, so the curve is deterministic.
pub fn asl_curve(table: &AslTable) -> Vec<(usize, f64)> {
    let mut asls: Vec<f64> = table.entries().iter().map(|e| e.asl).collect();
    asls.sort_by(f64::total_cmp);
    asls.into_iter()
        .enumerate()
        .map(|(i, asl)| (i + 1, asl))
        .collect()
}

/// Fraction of run pairs whose ASL falls strictly below `alpha`.
pub fn discriminative_power(table: &AslTable, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "alpha must lie strictly between 0 and 1, got {alpha}"
        )));
    }
    let total = table.entries().len();
    let significant = table.entries().iter().filter(|e| e.asl < alpha).count();
    Ok(significant as f64 / total as f64)
}
