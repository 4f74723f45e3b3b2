//! TREC-format input parsing: relevance judgments (qrels) and system runs.
//!
//! Both parsers are strict: a malformed line fails the whole stream with an
//! error naming the line, rather than being skipped silently.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};

use crate::{Error, Result};

/// Graded relevance judgments: `(topic, doc) -> level`.
///
/// `max_level` is the maximum observed level, unless overridden via
/// [`Qrels::with_max_level`]. An empty qrels carries no maximum and cannot be
/// used to build a gain mapping without an explicit override.
#[derive(Debug, Clone, Default)]
pub struct Qrels {
    judgments: BTreeMap<String, BTreeMap<String, u32>>,
    max_level: Option<u32>,
}

impl Qrels {
    /// Relevance level of `(topic, doc)`, if judged.
    pub fn level(&self, topic: &str, doc: &str) -> Option<u32> {
        self.judgments
            .get(topic)
            .and_then(|docs| docs.get(doc))
            .copied()
    }

    /// Whether any judgment exists for `topic`.
    pub fn has_topic(&self, topic: &str) -> bool {
        self.judgments.contains_key(topic)
    }

    /// Maximum relevance level: observed, or explicitly overridden.
    pub fn max_level(&self) -> Option<u32> {
        self.max_level
    }

    /// Number of `(topic, doc)` judgments.
    pub fn len(&self) -> usize {
        self.judgments.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.judgments.is_empty()
    }

    /// Overrides the maximum relevance level, e.g. when a collection defines
    /// more grades than the judged pool happens to use.
    ///
    /// Fails if an observed judgment already exceeds `max_level`.
    pub fn with_max_level(mut self, max_level: u32) -> Result<Self> {
        if let Some(observed) = self.observed_max() {
            if observed > max_level {
                return Err(Error::InvalidData(format!(
                    "observed relevance level {observed} exceeds requested maximum {max_level}"
                )));
            }
        }
        self.max_level = Some(max_level);
        Ok(self)
    }

    fn observed_max(&self) -> Option<u32> {
        self.judgments
            .values()
            .flat_map(|docs| docs.values().copied())
            .max()
    }
}

/// Parses a TREC qrels stream: four whitespace-separated fields per line,
/// `topic iteration doc level`, with the iteration field ignored.
///
/// Blank lines are skipped. A duplicate `(topic, doc)` judgment is resolved
/// by keeping the last one. A wrong field count, a non-integer level, or a
/// negative level fails with an error naming the line.
pub fn parse_qrels(text: &str) -> Result<Qrels> {
    let mut judgments: BTreeMap<String, BTreeMap<String, u32>> = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::parse(
                line_no,
                format!(
                    "expected 4 whitespace-separated fields (topic iteration doc level), found {}",
                    fields.len()
                ),
            ));
        }
        let level: i64 = fields[3].parse().map_err(|_| {
            Error::parse(
                line_no,
                format!("relevance level {:?} is not an integer", fields[3]),
            )
        })?;
        if level < 0 {
            return Err(Error::parse(
                line_no,
                format!("relevance level {level} is negative"),
            ));
        }
        let level = u32::try_from(level).map_err(|_| {
            Error::parse(line_no, format!("relevance level {level} is out of range"))
        })?;
        judgments
            .entry(fields[0].to_string())
            .or_default()
            .insert(fields[2].to_string(), level);
    }
    let mut qrels = Qrels {
        judgments,
        max_level: None,
    };
    qrels.max_level = qrels.observed_max();
    Ok(qrels)
}

/// One system run: per-topic document rankings, best first.
#[derive(Debug, Clone)]
pub struct Run {
    id: String,
    rankings: BTreeMap<String, Vec<String>>,
}

impl Run {
    /// Run identifier (the tag field of the run stream).
    pub fn id(&self) -> &str {
        &self.id
    }

    /// Ranked documents for `topic`, best first; empty when the run has no
    /// results for the topic.
    pub fn ranking(&self, topic: &str) -> &[String] {
        self.rankings.get(topic).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Topics this run retrieved documents for.
    pub fn topics(&self) -> impl Iterator<Item = &str> {
        self.rankings.keys().map(String::as_str)
    }
}

/// Parses a TREC run stream: six whitespace-separated fields per line,
/// `topic Q0 doc rank score tag`.
///
/// The ranking of each topic is determined by descending score, with ties
/// broken by ascending doc id; the rank field is ignored. A duplicate
/// `(topic, doc)` pair, a non-finite or non-numeric score, a wrong field
/// count, or an inconsistent tag fails with an error naming the line. The
/// run id is the tag shared by all lines.
pub fn parse_run(text: &str) -> Result<Run> {
    let mut id: Option<String> = None;
    let mut scored: BTreeMap<String, Vec<(String, f64)>> = BTreeMap::new();
    let mut seen: BTreeSet<(String, String)> = BTreeSet::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 6 {
            return Err(Error::parse(
                line_no,
                format!(
                    "expected 6 whitespace-separated fields (topic Q0 doc rank score tag), found {}",
                    fields.len()
                ),
            ));
        }
        let score: f64 = fields[4]
            .parse()
            .map_err(|_| Error::parse(line_no, format!("score {:?} is not a number", fields[4])))?;
        if !score.is_finite() {
            return Err(Error::parse(
                line_no,
                format!("score {score} is not finite"),
            ));
        }
        match &id {
            None => id = Some(fields[5].to_string()),
            Some(tag) if tag != fields[5] => {
                return Err(Error::parse(
                    line_no,
                    format!("run tag changed from {tag:?} to {:?}", fields[5]),
                ));
            }
            Some(_) => {}
        }
        if !seen.insert((fields[0].to_string(), fields[2].to_string())) {
            return Err(Error::parse(
                line_no,
                format!(
                    "duplicate document {:?} for topic {:?}",
                    fields[2], fields[0]
                ),
            ));
        }
        scored
            .entry(fields[0].to_string())
            .or_default()
            .push((fields[2].to_string(), score));
    }
    let id = id.ok_or_else(|| Error::InvalidData("empty run stream: no records".into()))?;
    let rankings = scored
        .into_iter()
        .map(|(topic, mut docs)| {
            docs.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
            (topic, docs.into_iter().map(|(doc, _)| doc).collect())
        })
        .collect();
    Ok(Run { id, rankings })
}

/// A collection of runs over a shared topic universe (the sorted union of
/// the topics retrieved by any run).
#[derive(Debug, Clone)]
pub struct RunSet {
    runs: Vec<Run>,
    topic_ids: Vec<String>,
}

impl RunSet {
    /// Builds a run set, preserving run order. Fails on duplicate run ids or
    /// when no run or no topic is present.
    pub fn new(runs: Vec<Run>) -> Result<Self> {
        if runs.is_empty() {
            return Err(Error::InvalidData("run set is empty".into()));
        }
        let mut ids: BTreeMap<&str, ()> = BTreeMap::new();
        for run in &runs {
            if let Entry::Occupied(_) = ids.entry(run.id()) {
                return Err(Error::InvalidData(format!(
                    "duplicate run id {:?}",
                    run.id()
                )));
            }
            ids.insert(run.id(), ());
        }
        let topic_ids: Vec<String> = runs
            .iter()
            .flat_map(|run| run.topics().map(str::to_string))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if topic_ids.is_empty() {
            return Err(Error::InvalidData("run set covers no topics".into()));
        }
        Ok(RunSet { runs, topic_ids })
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    pub fn run_ids(&self) -> Vec<&str> {
        self.runs.iter().map(Run::id).collect()
    }

    /// Sorted union of topics across all runs.
    pub fn topic_ids(&self) -> &[String] {
        &self.topic_ids
    }
}
