//! Acceptance suite for the batch pipeline: one test per criterion, each
//! printing a single `ACCEPTANCE <n> <name>: PASS|FAIL` line (visible with
//! `--nocapture`). Everything runs on synthetic, deterministic fixtures.

mod util;

use std::fs;
use std::panic::{catch_unwind, resume_unwind, UnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use tempfile::tempdir;
use util::*;

fn check(number: u8, name: &str, body: impl FnOnce() + UnwindSafe) {
    let outcome = catch_unwind(body);
    let verdict = if outcome.is_ok() { "PASS" } else { "FAIL" };
    println!("ACCEPTANCE {number} {name}: {verdict}");
    if let Err(cause) = outcome {
        resume_unwind(cause);
    }
}

/// Runs one subcommand against the collection in `dir` with `--metrics all`
/// and the full trial counts, writing into `dir/<out>`.
fn campaign_step(dir: &Path, subcommand: &str, out: &str, extra: &[&str]) {
    let mut args = vec![
        subcommand,
        "--qrels",
        "qrels.txt",
        "--runs",
        "runs",
        "--metrics",
        "all",
        "--out",
        out,
    ];
    args.extend_from_slice(extra);
    let output = bin()
        .current_dir(dir)
        .args(&args)
        .output()
        .expect("binary should spawn");
    assert!(
        output.status.success(),
        "{subcommand} failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
}

fn artifact_names(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    names
}

/// Criterion 7: a full desk-scale campaign on a synthetic collection of 39
/// runs x 80 topics — scoring all 39 model/aggregation combinations,
/// split-half consistency with 1,000 trials, and discriminative power with
/// 2,000 permutation trials — completes within 10 minutes and reproduces
/// every artifact byte-for-byte when rerun.
#[test]
fn criterion_7_desk_scale_campaign() {
    check(7, "desk-scale campaign", || {
        let dir = tempdir().unwrap();
        write_synthetic_collection(dir.path(), 39, 80, 9);

        let start = Instant::now();
        campaign_step(dir.path(), "score", "out1", &[]);
        campaign_step(
            dir.path(),
            "consistency",
            "out1",
            &["--B", "1000", "--hsd-trials", "2000"],
        );
        campaign_step(dir.path(), "discpower", "out1", &["--hsd-trials", "2000"]);
        let elapsed = start.elapsed();
        assert!(
            elapsed <= Duration::from_secs(600),
            "campaign took {elapsed:?}, over the 10-minute budget"
        );

        let out1 = dir.path().join("out1");
        let names = artifact_names(&out1);
        let scores: Vec<_> = names.iter().filter(|n| n.starts_with("scores_")).collect();
        let tables: Vec<_> = names
            .iter()
            .filter(|n| n.starts_with("asl_") && !n.starts_with("asl_curve_"))
            .collect();
        let curves: Vec<_> = names
            .iter()
            .filter(|n| n.starts_with("asl_curve_"))
            .collect();
        assert_eq!(scores.len(), 39, "one score matrix per combination");
        assert_eq!(tables.len(), 39);
        assert_eq!(curves.len(), 39);

        let sample = fs::read_to_string(out1.join("scores_inst@2.25+erg.csv")).unwrap();
        assert_eq!(header_row(&sample).len(), 40, "topic column plus 39 runs");
        assert_eq!(data_rows(&sample).len(), 80);

        let taus = fs::read_to_string(out1.join("consistency_taus.csv")).unwrap();
        assert_eq!(header_row(&taus).len(), 40, "trial column plus 39 metrics");
        assert_eq!(data_rows(&taus).len(), 1000);
        let summary = fs::read_to_string(out1.join("consistency_summary.csv")).unwrap();
        assert_eq!(data_rows(&summary).len(), 39);

        let curve = fs::read_to_string(out1.join("asl_curve_rbp@0.8+erg.csv")).unwrap();
        let points = data_rows(&curve);
        assert_eq!(points.len(), 39 * 38 / 2, "one point per run pair");
        let asl: Vec<f64> = points.iter().map(|r| r[1].parse().unwrap()).collect();
        assert!(asl.windows(2).all(|w| w[0] <= w[1]));

        // Rerun the whole campaign; every artifact must be byte-identical.
        campaign_step(dir.path(), "score", "out2", &[]);
        campaign_step(
            dir.path(),
            "consistency",
            "out2",
            &["--B", "1000", "--hsd-trials", "2000"],
        );
        campaign_step(dir.path(), "discpower", "out2", &["--hsd-trials", "2000"]);
        let out2 = dir.path().join("out2");
        assert_eq!(names, artifact_names(&out2));
        for name in &names {
            assert_eq!(
                fs::read(out1.join(name)).unwrap(),
                fs::read(out2.join(name)).unwrap(),
                "{name} differs between reruns"
            );
        }
    });
}

/// Criterion 8: on a fixed small fixture, the consistency summary and the
/// ASL table/curve artifacts match checked-in golden files byte-for-byte,
/// freezing the exact output format a downstream plotter consumes. Set
/// `GOLDEN_BLESS=1` to regenerate the golden files after a deliberate
/// format change.
#[test]
fn criterion_8_artifact_formats_match_golden_files() {
    check(8, "artifact formats match golden files", || {
        let dir = tempdir().unwrap();
        write_small_fixture(dir.path());

        let consistency = bin()
            .current_dir(dir.path())
            .args([
                "consistency",
                "--qrels",
                "qrels.txt",
                "--runs",
                "runs",
                "--depth",
                "6",
                "--metrics",
                "rbp@0.8+erg,err+err",
                "--B",
                "40",
                "--hsd-trials",
                "200",
                "--out",
                "got",
            ])
            .output()
            .expect("binary should spawn");
        assert!(
            consistency.status.success(),
            "{}",
            String::from_utf8_lossy(&consistency.stderr)
        );
        let discpower = bin()
            .current_dir(dir.path())
            .args([
                "discpower",
                "--qrels",
                "qrels.txt",
                "--runs",
                "runs",
                "--depth",
                "6",
                "--metrics",
                "err+err",
                "--hsd-trials",
                "300",
                "--out",
                "got",
            ])
            .output()
            .expect("binary should spawn");
        assert!(
            discpower.status.success(),
            "{}",
            String::from_utf8_lossy(&discpower.stderr)
        );

        let golden_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
        for name in [
            "consistency_summary.csv",
            "asl_err+err.csv",
            "asl_curve_err+err.csv",
        ] {
            let got = fs::read_to_string(dir.path().join("got").join(name)).unwrap();
            let golden_path = golden_dir.join(name);
            if std::env::var_os("GOLDEN_BLESS").is_some() {
                fs::create_dir_all(&golden_dir).unwrap();
                fs::write(&golden_path, &got).unwrap();
                continue;
            }
            let expected = fs::read_to_string(&golden_path)
                .unwrap_or_else(|e| panic!("missing golden file {}: {e}", golden_path.display()));
            assert_eq!(got, expected, "{name} drifted from its golden copy");
        }
    });
}
