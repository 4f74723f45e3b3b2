//! Topic-by-run score matrices: batch scoring, row-subset means, CSV I/O.

use std::io::Write as _;

use crate::exec::try_map_indexed;
use crate::gain::GainTable;
use crate::metric::{score, MetricSpec};
use crate::report::fmt_sig10;
use crate::{Error, Result};

/// Scores of one metric over every `(topic, run)` cell, topic-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix {
    metric: String,
    topic_ids: Vec<String>,
    run_ids: Vec<String>,
    values: Vec<f64>,
}

impl ScoreMatrix {
    /// Builds a matrix from row-major `(topic, run)` values, validating
    /// shape, id uniqueness, and finiteness.
    pub fn new(
        metric: impl Into<String>,
        topic_ids: Vec<String>,
        run_ids: Vec<String>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if topic_ids.is_empty() || run_ids.is_empty() {
            return Err(Error::InvalidData(
                "score matrix requires at least one topic and one run".into(),
            ));
        }
        for (label, ids) in [("topic", &topic_ids), ("run", &run_ids)] {
            let mut sorted = ids.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != ids.len() {
                return Err(Error::InvalidData(format!("duplicate {label} id")));
            }
        }
        if values.len() != topic_ids.len() * run_ids.len() {
            return Err(Error::InvalidData(format!(
                "expected {} values for {} topics x {} runs, got {}",
                topic_ids.len() * run_ids.len(),
                topic_ids.len(),
                run_ids.len(),
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("score matrix cell {bad}")));
        }
        Ok(ScoreMatrix {
            metric: metric.into(),
            topic_ids,
            run_ids,
            values,
        })
    }

    /// Metric label this matrix was scored under.
    pub fn metric(&self) -> &str {
        &self.metric
    }

    pub fn topic_ids(&self) -> &[String] {
        &self.topic_ids
    }

    pub fn run_ids(&self) -> &[String] {
        &self.run_ids
    }

    pub fn n_topics(&self) -> usize {
        self.topic_ids.len()
    }

    pub fn n_runs(&self) -> usize {
        self.run_ids.len()
    }

    /// Score at `(topic index, run index)`.
    pub fn value(&self, topic: usize, run: usize) -> f64 {
        self.values[topic * self.run_ids.len() + run]
    }

    /// Per-run mean over a subset of topic rows. Fails on an empty subset,
    /// an out-of-range index, or a duplicated index.
    pub fn column_means(&self, rows: &[usize]) -> Result<Vec<f64>> {
        if rows.is_empty() {
            return Err(Error::InvalidArgument("topic subset is empty".into()));
        }
        let mut seen = vec![false; self.topic_ids.len()];
        for &row in rows {
            if row >= self.topic_ids.len() {
                return Err(Error::InvalidArgument(format!(
                    "topic row {row} outside 0..{}",
                    self.topic_ids.len()
                )));
            }
            if std::mem::replace(&mut seen[row], true) {
                return Err(Error::InvalidArgument(format!("topic row {row} repeated")));
            }
        }
        let n_runs = self.run_ids.len();
        let mut sums = vec![0.0; n_runs];
        for &row in rows {
            let offset = row * n_runs;
            for (run, sum) in sums.iter_mut().enumerate() {
                *sum += self.values[offset + run];
            }
        }
        let count = rows.len() as f64;
        Ok(sums.into_iter().map(|s| s / count).collect())
    }

    /// Per-run mean over a subset of topic ids.
    pub fn mean_scores(&self, topics: &[&str]) -> Result<Vec<f64>> {
        let rows: Vec<usize> = topics
            .iter()
            .map(|topic| {
                self.topic_ids
                    .iter()
                    .position(|t| t == topic)
                    .ok_or_else(|| Error::InvalidData(format!("unknown topic id {topic:?}")))
            })
            .collect::<Result<_>>()?;
        self.column_means(&rows)
    }

    /// Per-run mean over all topics.
    pub fn grand_means(&self) -> Vec<f64> {
        let rows: Vec<usize> = (0..self.topic_ids.len()).collect();
        self.column_means(&rows).expect("full row set is valid")
    }

    /// Serializes to CSV: provenance comments, a header row of run ids with
    /// a leading `topic` column, then one row per topic with cells printed
    /// to 10 significant digits. Lines end with `\n`.
    pub fn to_csv(&self, comments: &[&str]) -> String {
        let mut out = Vec::new();
        writeln!(out, "# metric={}", self.metric).unwrap();
        for comment in comments {
            writeln!(out, "# {comment}").unwrap();
        }
        let mut writer = csv::WriterBuilder::new().from_writer(out);
        let mut header = vec!["topic".to_string()];
        header.extend(self.run_ids.iter().cloned());
        writer.write_record(&header).unwrap();
        for (t, topic) in self.topic_ids.iter().enumerate() {
            let mut record = vec![topic.clone()];
            record.extend((0..self.run_ids.len()).map(|r| fmt_sig10(self.value(t, r))));
            writer.write_record(&record).unwrap();
        }
        String::from_utf8(writer.into_inner().unwrap()).unwrap()
    }

    /// Parses a matrix written by [`ScoreMatrix::to_csv`]. Cell values are
    /// recovered at the serialized 10-significant-digit precision.
    pub fn from_csv(text: &str) -> Result<Self> {
        let metric = text
            .lines()
            .take_while(|line| line.starts_with('#'))
            .find_map(|line| line.trim_start_matches('#').trim().strip_prefix("metric="))
            .unwrap_or_default()
            .to_string();
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let header = reader
            .headers()
            .map_err(|e| Error::InvalidData(format!("bad matrix header: {e}")))?
            .clone();
        if header.is_empty() || header.get(0) != Some("topic") {
            return Err(Error::InvalidData(
                "matrix header must start with a topic column".into(),
            ));
        }
        let run_ids: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let mut topic_ids = Vec::new();
        let mut values = Vec::new();
        for (idx, record) in reader.records().enumerate() {
            let record = record
                .map_err(|e| Error::InvalidData(format!("bad matrix row {}: {e}", idx + 1)))?;
            if record.len() != run_ids.len() + 1 {
                return Err(Error::InvalidData(format!(
                    "matrix row {} has {} fields, expected {}",
                    idx + 1,
                    record.len(),
                    run_ids.len() + 1
                )));
            }
            topic_ids.push(record.get(0).unwrap_or_default().to_string());
            for cell in record.iter().skip(1) {
                let value: f64 = cell.parse().map_err(|_| {
                    Error::InvalidData(format!("matrix cell {cell:?} is not a number"))
                })?;
                values.push(value);
            }
        }
        ScoreMatrix::new(metric, topic_ids, run_ids, values)
    }
}

/// Scores every `(topic, run)` gain vector under one metric. Cells are
/// independent and evaluated in parallel when the `parallel` feature is on;
/// the result is identical either way.
pub fn score_matrix(table: &GainTable, spec: &MetricSpec) -> Result<ScoreMatrix> {
    let n_runs = table.run_ids().len();
    let n_topics = table.topic_ids().len();
    let values = try_map_indexed(n_topics * n_runs, |idx| {
        let (t, r) = (idx / n_runs, idx % n_runs);
        score(spec, table.vector(t, r))
            .map_err(|err| contextualize(err, &table.run_ids()[r], &table.topic_ids()[t]))
    })?;
    ScoreMatrix::new(
        spec.label(),
        table.topic_ids().to_vec(),
        table.run_ids().to_vec(),
        values,
    )
}

fn contextualize(err: Error, run: &str, topic: &str) -> Error {
    let context = format!("run {run:?} topic {topic:?}");
    match err {
        Error::NonFinite(msg) => Error::NonFinite(format!("{context}: {msg}")),
        Error::InvalidData(msg) => Error::InvalidData(format!("{context}: {msg}")),
        other => other,
    }
}
