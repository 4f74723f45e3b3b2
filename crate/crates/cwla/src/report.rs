//! Report serialization: UTF-8 CSV with `\n` line endings, numeric cells
//! printed to 10 significant digits, and `#`-prefixed provenance comments.

use std::io::Write as _;

use crate::consistency::{ConsistencyMatrix, ConsistencySummary};
use crate::hsd::AslTable;
use crate::similarity::SimilarityGrid;

/// Formats a value as a decimal with 10 significant digits.
pub fn fmt_sig10(v: f64) -> String {
    if v == 0.0 {
        return "0.000000000".to_string();
    }
    let exponent = v.abs().log10().floor() as i32;
    let decimals = (9 - exponent).max(0) as usize;
    format!("{v:.decimals$}")
}

fn csv_with_comments(comments: &[&str]) -> csv::Writer<Vec<u8>> {
    let mut out = Vec::new();
    for comment in comments {
        writeln!(out, "# {comment}").unwrap();
    }
    csv::WriterBuilder::new().from_writer(out)
}

fn finish(writer: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(writer.into_inner().unwrap()).unwrap()
}

/// Similarity grid as long-form rows: `agg_a,agg_b,tau,ci_low,ci_high`,
/// covering the full square grid. Rankings that contained exact ties are
/// listed in a `tied_rankings` comment.
pub fn similarity_csv(grid: &SimilarityGrid, comments: &[&str]) -> String {
    let tied: Vec<&str> = grid
        .labels()
        .iter()
        .zip(grid.tie_flags())
        .filter(|(_, &tied)| tied)
        .map(|(label, _)| label.as_str())
        .collect();
    let tied_line = format!(
        "tied_rankings={}",
        if tied.is_empty() {
            "none".to_string()
        } else {
            tied.join(",")
        }
    );
    let mut all: Vec<&str> = comments.to_vec();
    all.push(&tied_line);
    let mut writer = csv_with_comments(&all);
    writer
        .write_record(["agg_a", "agg_b", "tau", "ci_low", "ci_high"])
        .unwrap();
    for (a, label_a) in grid.labels().iter().enumerate() {
        for (b, label_b) in grid.labels().iter().enumerate() {
            let cell = grid.cell(a, b);
            writer
                .write_record([
                    label_a.as_str(),
                    label_b.as_str(),
                    &fmt_sig10(cell.tau),
                    &fmt_sig10(cell.ci_low),
                    &fmt_sig10(cell.ci_high),
                ])
                .unwrap();
        }
    }
    finish(writer)
}

/// Consistency summary rows: `metric,mean_tau,outperforms,tie_trials`,
/// already ordered best mean tau first.
pub fn consistency_summary_csv(summary: &ConsistencySummary, comments: &[&str]) -> String {
    let mut writer = csv_with_comments(comments);
    writer
        .write_record(["metric", "mean_tau", "outperforms", "tie_trials"])
        .unwrap();
    for row in &summary.rows {
        writer
            .write_record([
                row.metric.as_str(),
                &fmt_sig10(row.mean_tau),
                &row.outperforms.to_string(),
                &row.tie_trials.to_string(),
            ])
            .unwrap();
    }
    finish(writer)
}

/// Raw trial-by-metric tau matrix: `trial,<metric...>` with one row per
/// trial, trials numbered from 1.
pub fn consistency_matrix_csv(matrix: &ConsistencyMatrix, comments: &[&str]) -> String {
    let mut writer = csv_with_comments(comments);
    let mut header = vec!["trial".to_string()];
    header.extend(matrix.metric_labels().iter().cloned());
    writer.write_record(&header).unwrap();
    for trial in 0..matrix.b() {
        let mut record = vec![(trial + 1).to_string()];
        record.extend(
            (0..matrix.metric_labels().len()).map(|metric| fmt_sig10(matrix.tau(trial, metric))),
        );
        writer.write_record(&record).unwrap();
    }
    finish(writer)
}

/// Pairwise ASL rows: `run_a,run_b,diff,asl` in pair order.
pub fn asl_table_csv(table: &AslTable, comments: &[&str]) -> String {
    let mut writer = csv_with_comments(comments);
    writer
        .write_record(["run_a", "run_b", "diff", "asl"])
        .unwrap();
    for entry in table.entries() {
        writer
            .write_record([
                table.labels()[entry.a].as_str(),
                table.labels()[entry.b].as_str(),
                &fmt_sig10(entry.observed),
                &fmt_sig10(entry.asl),
            ])
            .unwrap();
    }
    finish(writer)
}

/// ASL curve points: `index,asl` with ASLs ascending.
pub fn asl_curve_csv(curve: &[(usize, f64)], comments: &[&str]) -> String {
    let mut writer = csv_with_comments(comments);
    writer.write_record(["index", "asl"]).unwrap();
    for (index, asl) in curve {
        writer
            .write_record([index.to_string(), fmt_sig10(*asl)])
            .unwrap();
    }
    finish(writer)
}
