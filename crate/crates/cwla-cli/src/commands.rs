//! The four subcommands: scoring, aggregation-similarity grids, split-half
//! consistency, and discriminative power. Every artifact is plain CSV with
//! a `#`-comment provenance header and is byte-reproducible from
//! `(inputs, config)`.

use std::fs;
use std::path::Path;

use cwla::report::{
    asl_curve_csv, asl_table_csv, consistency_matrix_csv, consistency_summary_csv, fmt_sig10,
    similarity_csv,
};
use cwla::{
    asl_curve, consistency_matrix, consistency_significance, discriminative_power, parse_model,
    randomized_tukey_hsd, score_matrix, similarity_grid, valid_aggregations, MetricSpec, Result,
    ScoreMatrix,
};

use crate::job::{load_gains, JobConfig};

fn write_artifact(dir: &Path, name: &str, content: &str) -> Result<()> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, content)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn comment_refs(comments: &[String]) -> Vec<&str> {
    comments.iter().map(String::as_str).collect()
}

/// Scores every run on every topic under each metric; one CSV per metric,
/// named `scores_<label>.csv`.
pub fn cmd_score(config: &JobConfig) -> Result<()> {
    let gains = load_gains(config)?;
    let specs = config.metric_specs()?;
    let comments = config.provenance();
    for spec in &specs {
        let matrix = score_matrix(&gains, spec)?;
        let csv = matrix.to_csv(&comment_refs(&comments));
        write_artifact(&config.out, &format!("scores_{}.csv", spec.label()), &csv)?;
    }
    Ok(())
}

/// Compares how all aggregations of one browsing model rank the runs:
/// a square rank-correlation grid with confidence intervals, named
/// `similarity_<model>.csv`.
pub fn cmd_similarity(config: &JobConfig, model_text: &str) -> Result<()> {
    let model = parse_model(model_text)?;
    let gains = load_gains(config)?;
    let mut entries = Vec::new();
    for agg in valid_aggregations(&model) {
        let spec = MetricSpec::new(model, agg, config.depth, config.truncation, config.gain_map)?;
        let matrix = score_matrix(&gains, &spec)?;
        // Grid rows and columns are the aggregation half of the label.
        let agg_label = spec.label().rsplit('+').next().unwrap().to_string();
        entries.push((agg_label, matrix));
    }
    let grid = similarity_grid(&entries)?;
    let mut comments = config.provenance();
    comments.push(format!("model={model_text}"));
    let csv = similarity_csv(&grid, &comment_refs(&comments));
    write_artifact(&config.out, &format!("similarity_{model_text}.csv"), &csv)
}

/// Split-half consistency of the chosen metrics: a summary with mean rank
/// correlation and significant-outperform counts, plus the raw
/// trial-by-metric correlation matrix.
pub fn cmd_consistency(config: &JobConfig) -> Result<()> {
    let gains = load_gains(config)?;
    let specs = config.metric_specs()?;
    let matrices: Vec<ScoreMatrix> = specs
        .iter()
        .map(|spec| score_matrix(&gains, spec))
        .collect::<Result<_>>()?;
    let trials = consistency_matrix(&matrices, config.b, config.seed)?;
    let summary = consistency_significance(&trials, config.hsd_trials, config.seed, config.alpha)?;
    let comments = config.provenance();
    let refs = comment_refs(&comments);
    write_artifact(
        &config.out,
        "consistency_summary.csv",
        &consistency_summary_csv(&summary, &refs),
    )?;
    write_artifact(
        &config.out,
        "consistency_taus.csv",
        &consistency_matrix_csv(&trials, &refs),
    )
}

/// Discriminative power of each metric: achieved significance levels for
/// every run pair (`asl_<label>.csv`) and the sorted curve ready for
/// plotting (`asl_curve_<label>.csv`).
pub fn cmd_discpower(config: &JobConfig) -> Result<()> {
    let gains = load_gains(config)?;
    let specs = config.metric_specs()?;
    let comments = config.provenance();
    for spec in &specs {
        let matrix = score_matrix(&gains, spec)?;
        let m = &matrix;
        let values: Vec<f64> = (0..m.n_topics())
            .flat_map(|t| (0..m.n_runs()).map(move |r| m.value(t, r)))
            .collect();
        let table = randomized_tukey_hsd(m.run_ids(), &values, config.hsd_trials, config.seed)?;

        let label = spec.label();
        let mut table_comments = comments.clone();
        table_comments.push(format!("metric={label}"));
        write_artifact(
            &config.out,
            &format!("asl_{label}.csv"),
            &asl_table_csv(&table, &comment_refs(&table_comments)),
        )?;

        let power = discriminative_power(&table, config.alpha)?;
        let mut curve_comments = table_comments.clone();
        curve_comments.push(format!("discriminative_power={}", fmt_sig10(power)));
        write_artifact(
            &config.out,
            &format!("asl_curve_{label}.csv"),
            &asl_curve_csv(&asl_curve(&table), &comment_refs(&curve_comments)),
        )?;
    }
    Ok(())
}
