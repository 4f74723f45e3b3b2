//! Job configuration: merging flags with an optional TOML config file
//! (flags win), loading the corpus, and building the provenance header
//! that every artifact embeds.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use cwla::{
    assemble_gains, combination_grid, parse_qrels, parse_run, BrowsingModel, Error, GainMapping,
    GainScheme, GainTable, MetricSpec, Result, Run, RunSet, TruncationPolicy,
};
use serde::Deserialize;

/// Flags shared by every subcommand. Each option falls back to the config
/// file, then to its documented default.
#[derive(Debug, Default, clap::Args)]
pub struct JobArgs {
    /// TREC-format qrels file with the relevance judgments
    #[arg(long, value_name = "PATH")]
    pub qrels: Option<PathBuf>,

    /// Run files or directories of run files (directories expand in sorted
    /// order)
    #[arg(long, value_name = "PATH", num_args = 1..)]
    pub runs: Vec<PathBuf>,

    /// Number of ranks evaluated per topic [default: 10]
    #[arg(long, value_name = "N")]
    pub depth: Option<usize>,

    /// Relevance-to-gain mapping: linear or exponential [default: linear]
    #[arg(long, value_name = "SCHEME")]
    pub gain_map: Option<String>,

    /// Highest relevance level of the collection [default: highest observed]
    #[arg(long, value_name = "N")]
    pub max_level: Option<u32>,

    /// Comma-separated metric specs (MODEL[@PARAM]+AGG[@PARAM]), or "all"
    /// for every valid model/aggregation combination [default: the six
    /// traditional cells]
    #[arg(long, value_name = "SPEC[,SPEC...]", value_delimiter = ',')]
    pub metrics: Vec<String>,

    /// Master seed for every randomized procedure [default: 42]
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,

    /// Split-half trial count for the consistency procedure [default: 1000]
    #[arg(long = "B", value_name = "N")]
    pub b: Option<usize>,

    /// Permutation trial count for the significance tests [default: 2000]
    #[arg(long, value_name = "N")]
    pub hsd_trials: Option<usize>,

    /// Significance level for outperform counts [default: 0.05]
    #[arg(long, value_name = "F")]
    pub alpha: Option<f64>,

    /// Tail policy at the evaluation depth: stop or open [default: stop]
    #[arg(long, value_name = "POLICY")]
    pub truncation: Option<String>,

    /// Output directory, created if missing [default: .]
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// TOML file supplying any of the other flags; explicit flags win
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

/// Config-file counterpart of [`JobArgs`]; keys match the flag names.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    qrels: Option<PathBuf>,
    runs: Option<Vec<PathBuf>>,
    depth: Option<usize>,
    gain_map: Option<String>,
    max_level: Option<u32>,
    metrics: Option<Vec<String>>,
    seed: Option<u64>,
    #[serde(alias = "B")]
    b: Option<usize>,
    hsd_trials: Option<usize>,
    alpha: Option<f64>,
    truncation: Option<String>,
    out: Option<PathBuf>,
}

/// Fully resolved job configuration.
#[derive(Debug)]
pub struct JobConfig {
    pub qrels: PathBuf,
    pub runs: Vec<PathBuf>,
    pub depth: usize,
    pub gain_map: GainScheme,
    pub max_level: Option<u32>,
    pub metrics: Vec<String>,
    pub seed: u64,
    pub b: usize,
    pub hsd_trials: usize,
    pub alpha: f64,
    pub truncation: TruncationPolicy,
    pub out: PathBuf,
}

impl JobConfig {
    /// Merges flags over the config file and applies defaults. Input files
    /// are not touched yet, except for reading the config file itself.
    pub fn resolve(args: JobArgs) -> Result<Self> {
        let file = match &args.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| annotate_io(path, e))?;
                toml::from_str::<ConfigFile>(&text).map_err(|e| {
                    Error::InvalidArgument(format!("config file {}: {e}", path.display()))
                })?
            }
            None => ConfigFile::default(),
        };
        let qrels = args.qrels.or(file.qrels).ok_or_else(|| {
            Error::InvalidArgument("--qrels is required (flag or config file)".into())
        })?;
        let runs = if args.runs.is_empty() {
            file.runs.unwrap_or_default()
        } else {
            args.runs
        };
        if runs.is_empty() {
            return Err(Error::InvalidArgument(
                "--runs requires at least one file or directory".into(),
            ));
        }
        let gain_map = match args.gain_map.or(file.gain_map) {
            Some(text) => text.parse()?,
            None => GainScheme::Linear,
        };
        let truncation = match args.truncation.or(file.truncation) {
            Some(text) => text.parse()?,
            None => TruncationPolicy::StopAtDepth,
        };
        let metrics = if args.metrics.is_empty() {
            file.metrics.unwrap_or_default()
        } else {
            args.metrics
        };
        let depth = args.depth.or(file.depth).unwrap_or(10);
        if depth == 0 {
            return Err(Error::InvalidArgument("--depth must be at least 1".into()));
        }
        Ok(JobConfig {
            qrels,
            runs,
            depth,
            gain_map,
            max_level: args.max_level.or(file.max_level),
            metrics,
            seed: args.seed.or(file.seed).unwrap_or(42),
            b: args.b.or(file.b).unwrap_or(1000),
            hsd_trials: args.hsd_trials.or(file.hsd_trials).unwrap_or(2000),
            alpha: args.alpha.or(file.alpha).unwrap_or(0.05),
            truncation,
            out: args.out.or(file.out).unwrap_or_else(|| PathBuf::from(".")),
        })
    }

    /// The six standard browsing models at this job's depth.
    pub fn standard_models(&self) -> Vec<BrowsingModel> {
        vec![
            BrowsingModel::Precision { k: self.depth },
            BrowsingModel::Dcg { k: self.depth },
            BrowsingModel::Rbp { p: 0.8 },
            BrowsingModel::Inst { t: 2.25 },
            BrowsingModel::Ap,
            BrowsingModel::Err,
        ]
    }

    /// Resolves the metric list: explicit specs, the full combination grid
    /// for `all`, or the six traditional cells when nothing was given.
    pub fn metric_specs(&self) -> Result<Vec<MetricSpec>> {
        let specs = if self.metrics.is_empty() {
            self.standard_models()
                .into_iter()
                .map(|model| {
                    let agg = if model == BrowsingModel::Err {
                        cwla::Aggregation::Err
                    } else {
                        cwla::Aggregation::Erg
                    };
                    MetricSpec::new(model, agg, self.depth, self.truncation, self.gain_map)
                })
                .collect::<Result<Vec<_>>>()?
        } else if self.metrics == ["all"] {
            combination_grid(
                &self.standard_models(),
                self.depth,
                self.truncation,
                self.gain_map,
            )?
        } else {
            self.metrics
                .iter()
                .map(|text| MetricSpec::parse(text, self.depth, self.truncation, self.gain_map))
                .collect::<Result<Vec<_>>>()?
        };
        Ok(specs)
    }

    /// Provenance lines embedded as `#` comments in every artifact.
    pub fn provenance(&self) -> Vec<String> {
        let runs: Vec<String> = self.runs.iter().map(|p| p.display().to_string()).collect();
        vec![
            format!("qrels={}", self.qrels.display()),
            format!("runs={}", runs.join(";")),
            format!("depth={}", self.depth),
            format!("gain_map={}", self.gain_map.name()),
            format!(
                "max_level={}",
                self.max_level
                    .map_or_else(|| "observed".to_string(), |l| l.to_string())
            ),
            format!("truncation={}", self.truncation.name()),
            format!("metrics={}", self.metrics.join(",")),
            format!("seed={}", self.seed),
            format!("B={}", self.b),
            format!("hsd_trials={}", self.hsd_trials),
            format!("alpha={}", self.alpha),
        ]
    }
}

/// Reads and parses the qrels and all run files, expands run directories in
/// sorted order, and assembles the per-cell gain vectors. Topics retrieved
/// by some run but absent from the qrels are reported on stderr.
pub fn load_gains(config: &JobConfig) -> Result<GainTable> {
    let qrels_text =
        fs::read_to_string(&config.qrels).map_err(|e| annotate_io(&config.qrels, e))?;
    let qrels = parse_qrels(&qrels_text).map_err(|e| annotate_parse(&config.qrels, e))?;
    let qrels = match config.max_level {
        Some(level) => qrels.with_max_level(level)?,
        None => qrels,
    };

    let mut runs: Vec<Run> = Vec::new();
    for path in expand_run_paths(&config.runs)? {
        let text = fs::read_to_string(&path).map_err(|e| annotate_io(&path, e))?;
        runs.push(parse_run(&text).map_err(|e| annotate_parse(&path, e))?);
    }
    let runs = RunSet::new(runs)?;

    let max_level = match qrels.max_level() {
        Some(level) if level >= 1 => level,
        _ => {
            return Err(Error::InvalidData(
                "qrels contain no positive relevance level; pass --max-level".into(),
            ))
        }
    };
    let mapping = GainMapping::new(config.gain_map, max_level)?;
    let (gains, report) = assemble_gains(&runs, &qrels, &mapping, config.depth)?;
    for topic in &report.unjudged_topics {
        eprintln!("warning: topic {topic} has no judgments; its gains are all zero");
    }
    Ok(gains)
}

/// Expands directories into their (sorted) regular files; plain files pass
/// through. Every returned path is an existing file.
fn expand_run_paths(paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for path in paths {
        let meta = fs::metadata(path).map_err(|e| annotate_io(path, e))?;
        if meta.is_dir() {
            let mut entries = Vec::new();
            for entry in fs::read_dir(path).map_err(|e| annotate_io(path, e))? {
                let entry = entry.map_err(|e| annotate_io(path, e))?;
                if entry
                    .file_type()
                    .map_err(|e| annotate_io(path, e))?
                    .is_file()
                {
                    entries.push(entry.path());
                }
            }
            if entries.is_empty() {
                return Err(Error::InvalidData(format!(
                    "run directory {} contains no files",
                    path.display()
                )));
            }
            entries.sort();
            files.extend(entries);
        } else {
            files.push(path.clone());
        }
    }
    Ok(files)
}

fn annotate_io(path: &Path, e: io::Error) -> Error {
    Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

fn annotate_parse(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse { line, message } => Error::Parse {
            line,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    }
}
