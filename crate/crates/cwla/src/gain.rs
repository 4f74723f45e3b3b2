//! Graded relevance levels mapped into gains in `[0, 1]`, and assembly of
//! per-rank gain vectors for every `(run, topic)` cell.

use crate::trec::{Qrels, RunSet};
use crate::{Error, Result};

/// How graded levels are mapped into `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GainScheme {
    /// `level / max_level`.
    Linear,
    /// `(2^level - 1) / 2^max_level`.
    Exponential,
}

impl GainScheme {
    /// Lower-case scheme name used in spec labels and provenance headers.
    pub fn name(&self) -> &'static str {
        match self {
            GainScheme::Linear => "linear",
            GainScheme::Exponential => "exponential",
        }
    }
}

impl std::str::FromStr for GainScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(GainScheme::Linear),
            "exponential" => Ok(GainScheme::Exponential),
            other => Err(Error::InvalidArgument(format!(
                "unknown gain scheme {other:?} (expected \"linear\" or \"exponential\")"
            ))),
        }
    }
}

/// A gain mapping: a scheme plus the maximum level it normalizes by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GainMapping {
    scheme: GainScheme,
    max_level: u32,
}

impl GainMapping {
    /// Fails when `max_level` is zero: at least one positive grade is needed
    /// for the mapping to be meaningful.
    pub fn new(scheme: GainScheme, max_level: u32) -> Result<Self> {
        if max_level == 0 {
            return Err(Error::InvalidArgument(
                "gain mapping requires max_level >= 1".into(),
            ));
        }
        Ok(GainMapping { scheme, max_level })
    }

    pub fn scheme(&self) -> GainScheme {
        self.scheme
    }

    pub fn max_level(&self) -> u32 {
        self.max_level
    }

    /// Maps a relevance level to a gain in `[0, 1]`.
    pub fn map(&self, level: u32) -> Result<f64> {
        if level > self.max_level {
            return Err(Error::InvalidData(format!(
                "relevance level {level} exceeds max_level {}",
                self.max_level
            )));
        }
        Ok(match self.scheme {
            GainScheme::Linear => f64::from(level) / f64::from(self.max_level),
            GainScheme::Exponential => {
                (2f64.powi(level as i32) - 1.0) / 2f64.powi(self.max_level as i32)
            }
        })
    }
}

/// Per-rank gains for one `(run, topic)` pair; every entry lies in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GainVector(Vec<f64>);

impl GainVector {
    /// Validates that the vector is non-empty and every gain is a finite
    /// value in `[0, 1]`.
    pub fn new(gains: Vec<f64>) -> Result<Self> {
        if gains.is_empty() {
            return Err(Error::InvalidData("gain vector is empty".into()));
        }
        for (idx, &g) in gains.iter().enumerate() {
            if !g.is_finite() || !(0.0..=1.0).contains(&g) {
                return Err(Error::InvalidData(format!(
                    "gain {g} at rank {} is outside [0, 1]",
                    idx + 1
                )));
            }
        }
        Ok(GainVector(gains))
    }

    /// Number of ranks.
    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Assembled gain vectors for every `(topic, run)` cell, topic-major.
#[derive(Debug, Clone)]
pub struct GainTable {
    run_ids: Vec<String>,
    topic_ids: Vec<String>,
    vectors: Vec<GainVector>,
}

impl GainTable {
    pub fn run_ids(&self) -> &[String] {
        &self.run_ids
    }

    pub fn topic_ids(&self) -> &[String] {
        &self.topic_ids
    }

    /// Gain vector for the cell at `(topic index, run index)`.
    pub fn vector(&self, topic: usize, run: usize) -> &GainVector {
        &self.vectors[topic * self.run_ids.len() + run]
    }
}

/// Coverage notes produced during assembly.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AssemblyReport {
    /// Topics retrieved by some run but absent from the qrels; their cells
    /// were assembled as all-zero vectors.
    pub unjudged_topics: Vec<String>,
}

/// Builds the gain vector of every `(topic, run)` cell: the ranking is
/// truncated or zero-padded to exactly `depth` entries, judged documents map
/// through `mapping`, and unjudged documents contribute zero gain.
///
/// Topics missing from the qrels entirely yield all-zero vectors and are
/// listed in the report so callers can surface a warning.
pub fn assemble_gains(
    runs: &RunSet,
    qrels: &Qrels,
    mapping: &GainMapping,
    depth: usize,
) -> Result<(GainTable, AssemblyReport)> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    let topic_ids: Vec<String> = runs.topic_ids().to_vec();
    let run_ids: Vec<String> = runs.run_ids().iter().map(|s| s.to_string()).collect();
    let mut vectors = Vec::with_capacity(topic_ids.len() * run_ids.len());
    for topic in &topic_ids {
        for run in runs.runs() {
            let ranking = run.ranking(topic);
            let mut gains = Vec::with_capacity(depth);
            for doc in ranking.iter().take(depth) {
                let gain = match qrels.level(topic, doc) {
                    Some(level) => mapping.map(level).map_err(|_| {
                        Error::InvalidData(format!(
                            "topic {topic:?} doc {doc:?}: relevance level {} exceeds max_level {}",
                            qrels.level(topic, doc).unwrap_or_default(),
                            mapping.max_level()
                        ))
                    })?,
                    None => 0.0,
                };
                gains.push(gain);
            }
            gains.resize(depth, 0.0);
            vectors.push(GainVector::new(gains)?);
        }
    }
    let unjudged_topics: Vec<String> = topic_ids
        .iter()
        .filter(|topic| !qrels.has_topic(topic))
        .cloned()
        .collect();
    Ok((
        GainTable {
            run_ids,
            topic_ids,
            vectors,
        },
        AssemblyReport { unjudged_topics },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trec::{parse_qrels, parse_run};
    use approx::assert_abs_diff_eq;

    #[test]
    fn linear_mapping() {
        let m = GainMapping::new(GainScheme::Linear, 4).unwrap();
        assert_abs_diff_eq!(m.map(0).unwrap(), 0.0);
        assert_abs_diff_eq!(m.map(3).unwrap(), 0.75);
        assert_abs_diff_eq!(m.map(4).unwrap(), 1.0);
    }

    #[test]
    fn exponential_mapping() {
        let m = GainMapping::new(GainScheme::Exponential, 4).unwrap();
        assert_abs_diff_eq!(m.map(0).unwrap(), 0.0);
        assert_abs_diff_eq!(m.map(3).unwrap(), 7.0 / 16.0);
        assert_abs_diff_eq!(m.map(4).unwrap(), 15.0 / 16.0);
    }

    #[test]
    fn mapping_rejects_overflow_level_and_zero_max() {
        let m = GainMapping::new(GainScheme::Linear, 4).unwrap();
        assert!(m.map(5).is_err());
        assert!(GainMapping::new(GainScheme::Linear, 0).is_err());
    }

    #[test]
    fn scheme_names_round_trip() {
        for scheme in [GainScheme::Linear, GainScheme::Exponential] {
            assert_eq!(scheme.name().parse::<GainScheme>().unwrap(), scheme);
        }
        assert!("log".parse::<GainScheme>().is_err());
    }

    #[test]
    fn gain_vector_validates_range() {
        assert!(GainVector::new(vec![]).is_err());
        assert!(GainVector::new(vec![0.5, 1.1]).is_err());
        assert!(GainVector::new(vec![0.5, -0.1]).is_err());
        assert!(GainVector::new(vec![0.5, f64::NAN]).is_err());
        assert_eq!(GainVector::new(vec![0.0, 1.0]).unwrap().depth(), 2);
    }

    fn fixture() -> (RunSet, Qrels) {
        let run = parse_run(
            "101 Q0 D1 1 3.0 sys\n\
             101 Q0 D2 2 2.0 sys\n\
             101 Q0 D3 3 1.0 sys\n\
             102 Q0 D7 1 1.0 sys\n",
        )
        .unwrap();
        let qrels = parse_qrels("101 0 D1 4\n101 0 D3 2\n").unwrap();
        (RunSet::new(vec![run]).unwrap(), qrels)
    }

    #[test]
    fn assembly_maps_pads_and_truncates() {
        let (runs, qrels) = fixture();
        let mapping = GainMapping::new(GainScheme::Linear, 4).unwrap();
        let (table, report) = assemble_gains(&runs, &qrels, &mapping, 5).unwrap();
        assert_eq!(table.vector(0, 0).as_slice(), [1.0, 0.0, 0.5, 0.0, 0.0]);
        assert_eq!(report.unjudged_topics, ["102"]);

        let (table, _) = assemble_gains(&runs, &qrels, &mapping, 2).unwrap();
        assert_eq!(table.vector(0, 0).as_slice(), [1.0, 0.0]);
    }

    #[test]
    fn assembly_gives_all_zero_vector_for_missing_topic() {
        let run_a = parse_run("101 Q0 D1 1 1.0 a\n102 Q0 D1 1 1.0 a\n").unwrap();
        let run_b = parse_run("101 Q0 D1 1 1.0 b\n").unwrap();
        let runs = RunSet::new(vec![run_a, run_b]).unwrap();
        let qrels = parse_qrels("101 0 D1 1\n102 0 D1 1\n").unwrap();
        let mapping = GainMapping::new(GainScheme::Linear, 1).unwrap();
        let (table, report) = assemble_gains(&runs, &qrels, &mapping, 10).unwrap();
        assert_eq!(table.vector(1, 1).as_slice(), [0.0; 10]);
        assert!(report.unjudged_topics.is_empty());
    }

    #[test]
    fn assembly_rejects_level_above_mapping_max() {
        let (runs, _) = fixture();
        let qrels = parse_qrels("101 0 D1 4\n").unwrap();
        let mapping = GainMapping::new(GainScheme::Linear, 2).unwrap();
        let err = assemble_gains(&runs, &qrels, &mapping, 5).unwrap_err();
        assert!(err.to_string().contains("exceeds max_level"), "{err}");
        assert!(assemble_gains(&runs, &qrels, &mapping, 0).is_err());
    }
}
