//! Shared helpers for the binary integration tests: locating the binary,
//! writing deterministic fixtures, and a synthetic collection generator.
#![allow(dead_code)] // Each test binary uses its own subset of the helpers.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Command for the compiled binary under test.
pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cwla"))
}

/// Runs the binary with `args` and returns its output; panics only when the
/// process cannot be spawned at all.
pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary should spawn")
}

pub fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout should be UTF-8")
}

pub fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr should be UTF-8")
}

/// Data rows of a CSV artifact: skips `#` comments and the header row.
pub fn data_rows(content: &str) -> Vec<Vec<String>> {
    content
        .lines()
        .filter(|line| !line.starts_with('#') && !line.is_empty())
        .skip(1)
        .map(|line| line.split(',').map(str::to_string).collect())
        .collect()
}

/// Header (first non-comment) row of a CSV artifact.
pub fn header_row(content: &str) -> Vec<String> {
    content
        .lines()
        .find(|line| !line.starts_with('#') && !line.is_empty())
        .expect("artifact should have a header")
        .split(',')
        .map(str::to_string)
        .collect()
}

/// A small deterministic collection: 6 topics, 8 documents, 5 runs, where
/// runs `sys4` and `sys5` retrieve identical rankings.
pub struct SmallFixture {
    pub qrels: PathBuf,
    pub runs_dir: PathBuf,
}

pub fn write_small_fixture(dir: &Path) -> SmallFixture {
    let qrels = dir.join("qrels.txt");
    let mut qrels_text = String::new();
    for t in 0..6 {
        for d in 0..8 {
            let level = [2, 1, 0, 1, 0, 2, 0, 1][(t + d) % 8];
            qrels_text.push_str(&format!("t{t} 0 d{d} {level}\n"));
        }
    }
    fs::write(&qrels, qrels_text).unwrap();

    let runs_dir = dir.join("runs");
    fs::create_dir(&runs_dir).unwrap();
    for k in 0..5 {
        // sys5 duplicates sys4's rankings under a different identifier.
        let perm_source = if k == 4 { 3 } else { k };
        let mut text = String::new();
        for t in 0..6 {
            let mut docs: Vec<usize> = (0..8).collect();
            docs.sort_by_key(|d| ((d + 3 * perm_source + t * perm_source) % 8, *d));
            for (rank, d) in docs.iter().take(6).enumerate() {
                text.push_str(&format!(
                    "t{t} Q0 d{d} {rank} {score}.5 sys{id}\n",
                    rank = rank + 1,
                    score = 60 - rank,
                    id = k + 1
                ));
            }
        }
        fs::write(runs_dir.join(format!("sys{}.run", k + 1)), text).unwrap();
    }
    SmallFixture { qrels, runs_dir }
}

/// A synthetic collection shaped like a desk-scale evaluation campaign:
/// `n_runs` runs over `n_topics` topics, 200 judged documents per topic with
/// graded levels 0..=2, and 15 retrieved documents per (run, topic).
pub struct SyntheticCollection {
    pub qrels: PathBuf,
    pub runs_dir: PathBuf,
}

pub fn write_synthetic_collection(
    dir: &Path,
    n_runs: usize,
    n_topics: usize,
    seed: u64,
) -> SyntheticCollection {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let qrels = dir.join("qrels.txt");
    let mut qrels_text = String::new();
    for t in 0..n_topics {
        for d in 0..200 {
            let level = [0, 0, 0, 1, 1, 2][rng.gen_range(0..6)];
            qrels_text.push_str(&format!("t{t:03} 0 d{d:03} {level}\n"));
        }
    }
    fs::write(&qrels, qrels_text).unwrap();

    let runs_dir = dir.join("runs");
    fs::create_dir(&runs_dir).unwrap();
    for r in 0..n_runs {
        let mut text = String::new();
        for t in 0..n_topics {
            let docs = rand::seq::index::sample(&mut rng, 200, 15);
            for (rank, d) in docs.iter().enumerate() {
                text.push_str(&format!(
                    "t{t:03} Q0 d{d:03} {rank} {score} r{r:02}\n",
                    rank = rank + 1,
                    score = 150 - rank
                ));
            }
        }
        fs::write(runs_dir.join(format!("r{r:02}.run")), text).unwrap();
    }
    SyntheticCollection { qrels, runs_dir }
}
