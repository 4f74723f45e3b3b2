//! Command-line front end for constructing offline retrieval metrics from
//! browsing-model/aggregation combinations and meta-evaluating them on a
//! collection of TREC-format runs.

mod commands;
mod job;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cwla::Error;

use job::{JobArgs, JobConfig};

#[derive(Parser)]
#[command(
    name = "cwla",
    version,
    about = "Construct and meta-evaluate offline retrieval metrics \
             (browsing model x gain aggregation)",
    after_help = "Outputs are UTF-8 CSV files with LF line endings and a \
                  `#`-comment provenance header; identical inputs and \
                  configuration reproduce them byte for byte."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score every run on every topic; one matrix CSV per metric
    Score(JobArgs),
    /// Rank-correlation grid between the aggregations of one browsing model
    Similarity {
        #[command(flatten)]
        job: JobArgs,
        /// Browsing model whose aggregation variants are compared,
        /// e.g. rbp@0.8 or inst@2.25
        #[arg(long, value_name = "MODEL")]
        model: String,
    },
    /// Split-half system-ranking consistency of the chosen metrics
    Consistency(JobArgs),
    /// Discriminative power of each metric via pairwise permutation tests
    Discpower(JobArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Score(args) => JobConfig::resolve(args).and_then(|c| commands::cmd_score(&c)),
        Command::Similarity { job, model } => {
            JobConfig::resolve(job).and_then(|c| commands::cmd_similarity(&c, &model))
        }
        Command::Consistency(args) => {
            JobConfig::resolve(args).and_then(|c| commands::cmd_consistency(&c))
        }
        Command::Discpower(args) => {
            JobConfig::resolve(args).and_then(|c| commands::cmd_discpower(&c))
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// Configuration mistakes exit 2 (matching clap's own usage errors), input
/// data problems exit 3, and non-finite numeric results exit 4.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidSpec(_) | Error::InvalidArgument(_) => 2,
        Error::Parse { .. } | Error::InvalidData(_) | Error::Io(_) => 3,
        Error::NonFinite(_) => 4,
    }
}
