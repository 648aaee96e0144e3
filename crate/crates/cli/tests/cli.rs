use std::path::Path;
use std::process::{Command, Output};

fn spinfoam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinfoam")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = spinfoam(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn tetra_at_the_pole() {
    let (h, rows) = csv(&stdout(&["tetra", "--theta", "0", "--phi", "0"]));
    assert_eq!(rows.len(), 1);
    assert!((num(&rows[0][column(&h, "cos12")]) - 1.0).abs() < 1e-12);
    assert!(num(&rows[0][column(&h, "cos13")]).abs() < 1e-12);
    assert!(num(&rows[0][column(&h, "cos14")]).abs() < 1e-12);
}

#[test]
fn tetra_normals_flip_sign() {
    let (h, rows) = csv(&stdout(&["tetra", "--states", "A0", "--convention", "normals"]));
    assert!((num(&rows[0][column(&h, "cos12")]) + 1.0).abs() < 1e-12);
    assert!((num(&rows[0][column(&h, "sum_1k")]) + 1.0).abs() < 1e-12);
}

#[test]
fn table2_rows_and_flags() {
    let (h, rows) = csv(&stdout(&["table2"]));
    assert_eq!(rows.len(), 10);
    let b0 = rows.iter().find(|r| r[0] == "B0").unwrap();
    assert!((num(&b0[column(&h, "theta")]) - std::f64::consts::PI / 5.0).abs() < 1e-15);
    assert_eq!(num(&b0[column(&h, "phi")]), 0.0);
    let flagged: Vec<&str> = rows.iter().filter(|r| r[column(&h, "flagged")] == "true").map(|r| r[0].as_str()).collect();
    assert_eq!(flagged, ["C0", "C1"]);
    let c1 = rows.iter().find(|r| r[0] == "C1").unwrap();
    assert!((num(&c1[column(&h, "delta")]) - 4.0 / 3.0).abs() < 1e-12);
    assert!((num(&c1[column(&h, "delta_listed")]) - 2.0 / 3.0).abs() < 1e-12);
    assert!(!c1[column(&h, "note")].is_empty());
}

#[test]
fn sweep_two_by_two() {
    let text = stdout(&["sweep", "--grid-theta", "2", "--grid-phi", "2"]);
    assert_eq!(text.lines().count(), 5);
    assert!(text.starts_with("theta,phi,re,im,abs,phase\n"));
}

#[test]
fn sweep_empty_grid_fails() {
    let out = spinfoam(&["sweep", "--grid-theta", "0"]);
    assert!(!out.status.success());
}

#[test]
fn table1_reports_scale_and_convention() {
    let text = stdout(&["table1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["meta"]["slots"], "cyclic");
    assert_eq!(v["meta"]["regular"], "C1");
    assert_eq!(v["rows"].as_array().unwrap().len(), 10);
    assert!(v["meta"]["scale_re"].as_f64().unwrap().is_finite());
}

#[test]
fn amplitude_routes_agree() {
    let rows: Vec<Vec<f64>> = ["sequential", "bruteforce", "table"]
        .iter()
        .map(|r| {
            let (h, rows) = csv(&stdout(&["amplitude", "--states", "B1", "--route", r]));
            vec![num(&rows[0][column(&h, "re")]), num(&rows[0][column(&h, "im")])]
        })
        .collect();
    for r in &rows[1..] {
        assert!((r[0] - rows[0][0]).abs() < 1e-12 && (r[1] - rows[0][1]).abs() < 1e-12);
    }
}

#[test]
fn reconstruct_regular_point() {
    let text = stdout(&["reconstruct", "--states", "C0", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let edges: Vec<f64> = v["meta"]["sorted_edge_lengths"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    for e in &edges {
        assert!((e - edges[0]).abs() < 1e-8);
    }
}

#[test]
fn reconstruct_degenerate_point_fails() {
    let out = spinfoam(&["reconstruct", "--theta", "0", "--phi", "0"]);
    assert!(!out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stderr).lines().count(), 1);
}

#[test]
fn errors_are_one_line_and_nonzero() {
    for args in [
        vec!["frobnicate"],
        vec!["tetra", "--theta", "0"],
        vec!["tetra", "--states", "Z9"],
        vec!["table2", "--theta", "0", "--phi", "0"],
        vec!["tetra", "--theta", "4", "--phi", "0"],
        vec!["experiment", "--depolarizing", "2"],
        vec![],
    ] {
        let out = spinfoam(&args);
        assert!(!out.status.success(), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
        assert!(err.starts_with("spinfoam: error:"));
    }
}

#[test]
fn unwritable_output_fails() {
    let out = spinfoam(&["table2", "--out", "/nonexistent-dir/out.csv"]);
    assert!(!out.status.success());
}

#[test]
fn outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for (cmd, extra) in [("experiment", vec!["--format", "json"]), ("reconstruct", vec!["--areas", "1,1,1,1.2", "--cos12", "0.3", "--cos13", "0.35"]), ("sweep", vec!["--grid-theta", "5", "--grid-phi", "4"])] {
        let paths: Vec<_> = (0..2).map(|i| dir.path().join(format!("{cmd}{i}"))).collect();
        for p in &paths {
            let mut args = vec![cmd, "--out", p.to_str().unwrap()];
            args.extend(&extra);
            assert!(spinfoam(&args).status.success(), "{cmd}");
        }
        assert_eq!(std::fs::read(&paths[0]).unwrap(), std::fs::read(&paths[1]).unwrap(), "{cmd}");
    }
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "command = \"fluct\"\nstates = [\"A0\", \"C0\"]\n").unwrap();
    let (_, rows) = csv(&stdout(&["--config", cfg.to_str().unwrap()]));
    assert_eq!(rows.iter().map(|r| r[0].as_str()).collect::<Vec<_>>(), ["A0", "C0"]);
    let (_, rows) = csv(&stdout(&["--config", cfg.to_str().unwrap(), "--states", "E1"]));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][0], "E1");
}

#[test]
fn shipped_experiment_config_runs() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("config/experiment.toml");
    let text = stdout(&["--config", path.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["targets"].as_array().unwrap().len(), 10);
    assert!(v["min_fidelity"].as_f64().unwrap() > 0.95);
}

#[test]
fn csv_and_json_carry_the_same_values() {
    let (h, rows) = csv(&stdout(&["fluct", "--states", "B0"]));
    let v: serde_json::Value = serde_json::from_str(&stdout(&["fluct", "--states", "B0", "--format", "json"])).unwrap();
    let from_csv = num(&rows[0][column(&h, "delta_operators")]);
    assert_eq!(from_csv, v["rows"][0]["delta_operators"].as_f64().unwrap());
}
