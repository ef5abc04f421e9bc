use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use hdconv::dataset::{write_dataset, FeatureEncoding, RAW_EDGES_FILE, RAW_NODES_FILE};
use hdconv::experiment::RunReport;
use hdconv::split::write_splits;
use hdconv::synthetic::{generate, SyntheticSpec};
use hdconv::{FeatureKind, SplitIndices};
use tempfile::TempDir;

fn hdconv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hdconv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture(kind: FeatureKind) -> TempDir {
    let dir = TempDir::new().unwrap();
    let spec = SyntheticSpec { name: "toy".into(), kind, ..Default::default() };
    write_dataset(&generate(&spec).unwrap(), dir.path(), FeatureEncoding::Tsv).unwrap();
    dir
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json_report(out: &Output) -> RunReport {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    RunReport::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap()
}

#[test]
fn json_report_is_consistent() {
    let dir = fixture(FeatureKind::Binary);
    let out = hdconv(&["--data", path(dir.path()), "--output", "json", "--n-splits", "3", "--seed", "5"]);
    let report = json_report(&out);
    assert_eq!(report.splits.len(), 3);
    assert_eq!(report.num_nodes, 200);
    assert_eq!(report.config.seed, 5);
    let mean = report.splits.iter().map(|s| s.test_accuracy).sum::<f64>() / 3.0;
    assert!((mean - report.mean_test_accuracy).abs() < 1e-12);
    assert!(report.timing.encode_seconds > 0.0);
}

#[test]
fn table_output_shows_timing_only_when_asked() {
    let dir = fixture(FeatureKind::Real);
    let plain = hdconv(&["--data", path(dir.path()), "--n-splits", "2"]);
    assert!(plain.status.success());
    let text = String::from_utf8(plain.stdout).unwrap();
    assert!(text.contains("test_acc"));
    assert!(!text.contains("timing"));

    let timed = hdconv(&["--data", path(dir.path()), "--n-splits", "2", "--time"]);
    assert!(String::from_utf8(timed.stdout).unwrap().contains("timing (s)"));
}

#[test]
fn dataset_name_resolves_under_data_root() {
    let root = TempDir::new().unwrap();
    let spec = SyntheticSpec { name: "toy".into(), ..Default::default() };
    write_dataset(&generate(&spec).unwrap(), &root.path().join("toy"), FeatureEncoding::Bin).unwrap();
    let out = hdconv(&["--data", path(root.path()), "--dataset", "toy", "--output", "json", "--n-splits", "1"]);
    assert_eq!(json_report(&out).dataset, "toy");
}

#[test]
fn alpha_sweep_selects_a_grid_value() {
    let dir = fixture(FeatureKind::Binary);
    let out = hdconv(&[
        "--data", path(dir.path()), "--output", "json", "--n-splits", "2", "--alpha-sweep", "0,0.5,1",
    ]);
    let report = json_report(&out);
    let sweep = report.sweep.expect("sweep section");
    assert_eq!(sweep.grid.len(), 3);
    assert!([0.0, 0.5, 1.0].contains(&sweep.selected_alpha));
    assert_eq!(report.alpha_used, sweep.selected_alpha);
}

#[test]
fn split_file_and_report_file() {
    let dir = fixture(FeatureKind::Binary);
    let splits = dir.path().join("my_splits.json");
    write_splits(
        &splits,
        &[SplitIndices { train: (0..100).collect(), val: (100..150).collect(), test: (150..200).collect() }],
    )
    .unwrap();
    let report_file = dir.path().join("out.json");
    let out = hdconv(&[
        "--data", path(dir.path()), "--splits", path(&splits), "--report", path(&report_file),
    ]);
    assert!(out.status.success());
    let report = RunReport::from_json(&fs::read_to_string(&report_file).unwrap()).unwrap();
    assert_eq!(report.splits.len(), 1);
    assert_eq!(report.splits[0].test_size, 50);
    assert!(report.config.split_source.starts_with("file:"));
}

#[test]
fn raw_text_layout_runs() {
    let dir = TempDir::new().unwrap();
    let mut nodes = String::from("node_id\tfeature\tlabel\n");
    let mut edges = String::from("node_id\tnode_id\n");
    for v in 0..30 {
        let label = v % 3;
        let feats: Vec<&str> = (0..6).map(|k| if k / 2 == label { "1" } else { "0" }).collect();
        nodes.push_str(&format!("{v}\t{}\t{label}\n", feats.join(",")));
        edges.push_str(&format!("{v}\t{}\n", (v + 3) % 30));
    }
    fs::write(dir.path().join(RAW_NODES_FILE), nodes).unwrap();
    fs::write(dir.path().join(RAW_EDGES_FILE), edges).unwrap();
    let out = hdconv(&["--data", path(dir.path()), "--output", "json", "--splits", "ratio", "--n-splits", "2"]);
    let report = json_report(&out);
    assert_eq!(report.num_nodes, 30);
    assert_eq!(report.mean_test_accuracy, 1.0);
}

#[test]
fn config_errors_exit_2() {
    let dir = fixture(FeatureKind::Real);
    let d = path(dir.path());
    for args in [
        vec!["--data", d, "--alpha", "1.5"],
        vec!["--data", d, "--layers", "0"],
        vec!["--data", d, "--n-splits", "0"],
        vec!["--data", d, "--mode", "binary"],
        vec!["--data", d, "--mode", "ternary"],
        vec!["--data", d, "--alpha-sweep", "0.2,2"],
        vec!["--data", d, "--workers", "0"],
    ] {
        assert_eq!(hdconv(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn data_errors_exit_3() {
    let missing = hdconv(&["--data", "/definitely/not/here"]);
    assert_eq!(missing.status.code(), Some(3));
    assert!(!missing.stderr.is_empty());

    let dir = fixture(FeatureKind::Binary);
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"splits":[{"train":[0,0],"val":[],"test":[1]}]}"#).unwrap();
    assert_eq!(hdconv(&["--data", path(dir.path()), "--splits", path(&bad)]).status.code(), Some(3));

    fs::write(dir.path().join("labels.tsv"), "0\nnot-a-label\n").unwrap();
    assert_eq!(hdconv(&["--data", path(dir.path())]).status.code(), Some(3));

    // no splits.json shipped with this dataset
    let dir = fixture(FeatureKind::Binary);
    assert_eq!(hdconv(&["--data", path(dir.path()), "--splits", "fixed"]).status.code(), Some(3));
}
