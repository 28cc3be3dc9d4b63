//! End-to-end tests of the `indhom` binary: every subcommand is driven
//! through a real process, and outputs are parsed back as JSON where
//! the command emits JSON.

use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn indhom(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_indhom"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "expected success, got {:?}\nstderr: {}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn build_emits_graph_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = indhom(&["build", "cycle:k=6"], dir.path());
    let v = stdout_json(&out);
    assert_eq!(v["labels"].as_array().unwrap().len(), 6);
    assert_eq!(v["edges"].as_array().unwrap().len(), 6);
}

#[test]
fn homology_of_a_built_file_and_of_a_spec_agree() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("c6k3.json");
    let built = indhom(
        &[
            "build",
            "cycle-x-complete:k=6,n=3",
            "--out",
            g.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert!(built.status.success());

    let from_file = stdout_json(&indhom(&["homology", g.to_str().unwrap()], dir.path()));
    let from_spec = stdout_json(&indhom(
        &["homology", "cycle-x-complete:k=6,n=3"],
        dir.path(),
    ));
    assert_eq!(from_file["profile"], from_spec["profile"]);
    assert_eq!(from_file["profile"]["betti"]["3"], 14);
    assert!(from_file["timings_ms"].get("total").is_some());

    // The stderr summary line is human-readable.
    let rerun = indhom(&["homology", "cycle-x-complete:k=6,n=3"], dir.path());
    let summary = String::from_utf8_lossy(&rerun.stderr);
    assert!(summary.contains("H3=Z^14"), "stderr was: {summary}");
}

#[test]
fn homology_flags_are_honored() {
    let dir = tempfile::tempdir().unwrap();
    // A face cap low enough to trip on C_12 must fail loudly.
    let out = indhom(
        &["homology", "cycle:k=12", "--no-reduce", "--max-faces", "10"],
        dir.path(),
    );
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("resource budget exceeded"),
        "stderr was: {err}"
    );

    // Capping the enumerated dimension at 5 certifies degrees <= 4,
    // which still covers both spheres of I(C_12).
    let v = stdout_json(&indhom(
        &["homology", "cycle:k=12", "--max-dim", "5"],
        dir.path(),
    ));
    assert_eq!(v["profile"]["betti"]["3"], 2);
    // The uncertifiable top degree is withheld, not reported as zero.
    assert!(v["profile"]["betti"].get("5").is_none());
}

#[test]
fn predict_reports_rule_and_respects_proven_ranges() {
    let dir = tempfile::tempdir().unwrap();
    let v = stdout_json(&indhom(&["predict", "path-x-complete:k=6,n=3"], dir.path()));
    assert_eq!(v["prediction"]["rule"], "path-product");
    assert_eq!(v["prediction"]["provenance"], "proven");
    assert_eq!(v["prediction"]["profile"]["sphere_counts"]["3"], 4);

    // The general triple product is out of proven range without the flag…
    let denied = indhom(
        &["predict", "complete-x-complete-x-complete:n=3,m=3,l=3"],
        dir.path(),
    );
    assert!(!denied.status.success());
    let err = String::from_utf8_lossy(&denied.stderr);
    assert!(err.contains("allow-conjecture"), "stderr was: {err}");

    // …and labeled conjectural with it.
    let v = stdout_json(&indhom(
        &[
            "predict",
            "complete-x-complete-x-complete:n=3,m=3,l=3",
            "--allow-conjecture",
        ],
        dir.path(),
    ));
    assert_eq!(v["prediction"]["provenance"], "conjectural");
    assert_eq!(v["prediction"]["profile"]["sphere_counts"]["3"], 46);
}

#[test]
fn verify_sweep_logs_resumes_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let sweep = dir.path().join("sweep.json");
    let log = dir.path().join("run.jsonl");
    std::fs::write(
        &sweep,
        r#"{
            "families": [
                {"template": "complete-x-complete:n={n},m={m}", "n": [2, 3], "m": [2, 3]}
            ],
            "options": {}
        }"#,
    )
    .unwrap();

    let first = indhom(
        &[
            "verify",
            "--sweep",
            sweep.to_str().unwrap(),
            "--log",
            log.to_str().unwrap(),
            "--format",
            "json",
            "--jobs",
            "2",
        ],
        dir.path(),
    );
    let v = stdout_json(&first);
    assert_eq!(v["summary"]["records"], 4);
    assert_eq!(v["summary"]["matches"], 4);
    assert_eq!(v["summary"]["mismatches"], 0);
    let log_lines = std::fs::read_to_string(&log).unwrap().lines().count();
    assert_eq!(log_lines, 4);

    // A second run resumes from the log: identical report, no new lines.
    let second = indhom(
        &[
            "verify",
            "--sweep",
            sweep.to_str().unwrap(),
            "--log",
            log.to_str().unwrap(),
            "--format",
            "json",
        ],
        dir.path(),
    );
    assert_eq!(stdout_json(&second), v);
    let log_lines_after = std::fs::read_to_string(&log).unwrap().lines().count();
    assert_eq!(log_lines_after, 4);

    // The standalone report command renders the same log as CSV.
    let csv_out = indhom(
        &["report", "--log", log.to_str().unwrap(), "--format", "csv"],
        dir.path(),
    );
    assert!(csv_out.status.success());
    let csv = String::from_utf8_lossy(&csv_out.stdout);
    assert_eq!(csv.lines().count(), 5, "header + 4 records:\n{csv}");
    assert!(csv
        .lines()
        .next()
        .unwrap()
        .starts_with("instance_key,spec,rule"));
}

#[test]
fn hunt_torsion_reports_window_checks() {
    let dir = tempfile::tempdir().unwrap();
    let out = indhom(
        &[
            "hunt-torsion",
            "--k-range",
            "7..7",
            "--n-range",
            "2..2",
            "--format",
            "json",
        ],
        dir.path(),
    );
    let v = stdout_json(&out);
    assert_eq!(v["summary"]["records"], 1);
    assert_eq!(v["summary"]["torsion"], 0);
    let rec = &v["records"][0];
    assert_eq!(rec["spec"], "cycle-x-complete:k=7,n=2");
    assert_eq!(rec["torsion_found"], false);
    assert_eq!(rec["window_violation"], false);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("0 with torsion"), "stderr was: {stderr}");
}

#[test]
fn bad_inputs_fail_with_useful_errors() {
    let dir = tempfile::tempdir().unwrap();
    for (args, needle) in [
        (vec!["build", "moebius:k=5"], "unknown family"),
        (vec!["homology", "cycle:k=2"], "k >= 3"),
        (vec!["homology", "missing.json"], "missing.json"),
        (
            vec!["hunt-torsion", "--k-range", "9..7", "--n-range", "2..2"],
            "range",
        ),
        (vec!["verify", "--sweep", "nope.json"], "nope.json"),
    ] {
        let out = indhom(&args, dir.path());
        assert!(!out.status.success(), "{args:?} unexpectedly succeeded");
        let err = String::from_utf8_lossy(&out.stderr).to_lowercase();
        assert!(
            err.contains(&needle.to_lowercase()),
            "{args:?}: stderr lacked {needle:?}:\n{err}"
        );
    }
}
