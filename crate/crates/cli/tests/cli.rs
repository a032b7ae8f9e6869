//! End-to-end runs of the binary: exit codes, artifact determinism, and the
//! file pipeline matching the in-process pipeline.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_pantograph")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin())
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn tmpdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pantograph-cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn build_writes_json_and_dot() {
    let dir = tmpdir("build");
    let out = run_in(&dir, &["build", "--preset", "cantor", "--depth", "4"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let json = std::fs::read_to_string(dir.join("tree.json")).unwrap();
    assert!(json.contains("\"vertices\""));
    let dot = std::fs::read_to_string(dir.join("tree.dot")).unwrap();
    assert!(dot.starts_with("graph coretree"));
}

#[test]
fn bad_flags_exit_64() {
    let dir = tmpdir("badflag");
    let out = run_in(&dir, &["build", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(64));
    let out = run_in(&dir, &["certify", "--preset", "flute"]); // missing -K/--horizon
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn shallow_truncation_exits_65() {
    let dir = tmpdir("shallow");
    let out = run_in(&dir, &["slice", "30", "--depth", "5"]);
    assert_eq!(out.status.code(), Some(65));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("too shallow"), "{msg}");
}

#[test]
fn certify_flute_is_valid_and_exit_zero() {
    let dir = tmpdir("certify");
    let out = run_in(
        &dir,
        &[
            "certify",
            "--preset",
            "flute",
            "--depth",
            "20",
            "-K",
            "5",
            "--horizon",
            "15",
            "--json-out",
            "cert.json",
        ],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("contradiction established"));
    let cert = std::fs::read_to_string(dir.join("cert.json")).unwrap();
    let parsed = pantograph::certificate::from_json(&cert).unwrap();
    assert!(parsed.is_valid());
    assert_eq!(parsed.ledger.len(), 11);
}

#[test]
fn refused_certificate_exits_2() {
    let dir = tmpdir("refused");
    let out = run_in(
        &dir,
        &[
            "certify",
            "--preset",
            "flute",
            "--depth",
            "12",
            "-K",
            "2",
            "--horizon",
            "8",
            "--pentagon-threshold",
            "1000000",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("REFUSED"));
}

#[test]
fn identical_configs_produce_byte_identical_artifacts() {
    let d1 = tmpdir("det1");
    let d2 = tmpdir("det2");
    for dir in [&d1, &d2] {
        let out = run_in(
            dir,
            &[
                "label",
                "--preset",
                "flute_with_genus",
                "--genus",
                "2",
                "--depth",
                "6",
            ],
        );
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let a = std::fs::read(d1.join("metric.json")).unwrap();
    let b = std::fs::read(d2.join("metric.json")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn pentagon_scan_emits_csv_with_nonnegative_slack() {
    let dir = tmpdir("scan");
    let out = run_in(
        &dir,
        &[
            "pentagon-scan",
            "--a",
            "1.5,2.0",
            "--span",
            "5",
            "--step",
            "0.5",
        ],
    );
    assert!(out.status.success());
    let csv = String::from_utf8_lossy(&out.stdout);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("a,c,d,slack"));
    let mut rows = 0;
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 4);
        let slack: f64 = cols[3].parse().unwrap();
        assert!(slack >= -1e-9, "{line}");
        rows += 1;
    }
    assert_eq!(rows, 20, "two a-values, ten c-steps each");
}

#[test]
fn file_pipeline_matches_in_process_pipeline() {
    let dir = tmpdir("pipeline");
    // build -> normalize -> label -> certify, through files
    let out = run_in(&dir, &["build", "--preset", "flute", "--depth", "14"]);
    assert!(out.status.success());
    let out = run_in(&dir, &["normalize", "--input", "tree.json"]);
    assert!(out.status.success());
    let out = run_in(
        &dir,
        &[
            "label",
            "--input",
            "normalized.json",
            "--out",
            "metric.json",
        ],
    );
    assert!(out.status.success());
    let out = run_in(
        &dir,
        &[
            "certify",
            "--metric",
            "metric.json",
            "-K",
            "3",
            "--horizon",
            "10",
            "--json-out",
            "cert_files.json",
        ],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    // The same pipeline in-process.
    let spec = pantograph::tree::preset("flute", None).unwrap();
    let tree = pantograph::tree::truncate(spec, 14);
    let (tree, _) = pantograph::surgery::normalize(&tree).unwrap();
    let complex = pantograph::pants::build(&tree).unwrap();
    let defaults: BTreeMap<_, _> = complex.cuffs.keys().map(|&c| (c, 1.0)).collect();
    let mc = pantograph::metric::label_lengths(&complex, &defaults).unwrap();
    let cert = pantograph::certificate::verify_non_wandering(&mc, 3.0, 10, 2.0).unwrap();

    let from_files = pantograph::certificate::from_json(
        &std::fs::read_to_string(dir.join("cert_files.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(cert, from_files);
}

#[test]
fn slice_report_is_consistent() {
    let dir = tmpdir("slice");
    let out = run_in(
        &dir,
        &[
            "slice", "3", "--preset", "cantor", "--depth", "8", "--out", "s.json",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("s.json")).unwrap()).unwrap();
    assert_eq!(report["n"], 3);
    assert_eq!(
        report["euler_characteristic"],
        report["euler_from_topology"]
    );
    // Frontier of slice n is uniformly labeled n in the genus-0 case.
    for (_, v) in report["frontier_labels"].as_object().unwrap() {
        assert_eq!(v.as_u64(), Some(3));
    }
}
