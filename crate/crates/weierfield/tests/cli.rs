//! CLI contract tests: exit codes, file formats, validation errors.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_weierfield")
}

fn workdir(label: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "weierfield-cli-{label}-{}",
        std::process::id()
    ));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn base_config() -> serde_json::Value {
    serde_json::json!({
        "field": {
            "phi": {"d": 1, "terms": [
                {"k": [1], "re": 0.5, "im": 0.0},
                {"k": [-1], "re": 0.5, "im": 0.0}
            ]},
            "b": 2.0,
            "tail_tol": 1e-12
        },
        "lattice": {"n": 2, "root_corner": [0.0], "root_side": 1.0, "j_max": 5, "quad_nodes": 6},
        "stopping": {"m_threshold": 4.0, "theta": 1.0471975511965976, "k_generations": 2},
        "qr": {"n": 2, "sweep_depth": 3},
        "sampling": {"seed": 11, "count": 30, "points_per_decade": 8}
    })
}

fn run(dir: &Path, config: &serde_json::Value, args: &[&str]) -> Output {
    let config_path = dir.join("config.json");
    std::fs::write(&config_path, config.to_string()).unwrap();
    Command::new(bin())
        .arg("--config")
        .arg(&config_path)
        .arg("--out")
        .arg(dir.join("out"))
        .args(args)
        .output()
        .expect("spawn CLI")
}

#[test]
fn eval_writes_jet_csv_with_hash_header() {
    let dir = workdir("eval");
    let points = dir.join("points.txt");
    std::fs::write(&points, "0.0 0.5\n").unwrap();
    let out = run(&dir, &base_config(), &["eval", "--points", points.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let csv = std::fs::read_to_string(dir.join("out/jets.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("# config_hash="));
    assert_eq!(lines.next().unwrap(), "x1,y,value,g1,g2,h1_1,h1_2,h2_2");
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    // Hessian trace ~ 0 for a harmonic field.
    let h11: f64 = row[5].parse().unwrap();
    let h22: f64 = row[7].parse().unwrap();
    assert!((h11 + h22).abs() <= 1e-9 * (1.0 + h11.abs()));

    let manifest = std::fs::read_to_string(dir.join("out/run_manifest.json")).unwrap();
    assert!(manifest.contains("jets.csv"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn eval_empty_points_file_is_ok() {
    let dir = workdir("eval-empty");
    let points = dir.join("points.txt");
    std::fs::write(&points, "").unwrap();
    let out = run(&dir, &base_config(), &["eval", "--points", points.to_str().unwrap()]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.join("out/jets.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2); // hash comment + header only
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn eval_malformed_row_reports_line_and_exits_2() {
    let dir = workdir("eval-bad");
    let points = dir.join("points.txt");
    std::fs::write(&points, "0.0 0.5\n0.3 zebra\n").unwrap();
    let out = run(&dir, &base_config(), &["eval", "--points", points.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "stderr: {err}");
    assert!(err.starts_with("error[config]"), "stderr: {err}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn eval_below_floor_exits_3() {
    let dir = workdir("eval-floor");
    let points = dir.join("points.txt");
    std::fs::write(&points, "0.0 1e-15\n").unwrap();
    let out = run(&dir, &base_config(), &["eval", "--points", points.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[numeric]"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn config_errors_exit_2() {
    let dir = workdir("badcfg");
    let mut cfg = base_config();
    cfg["unknown_section"] = serde_json::json!({});
    let out = run(&dir, &cfg, &["qr"]);
    assert_eq!(out.status.code(), Some(2));

    let mut cfg = base_config();
    cfg["field"]["b"] = serde_json::json!(0.9);
    let out = run(&dir, &cfg, &["qr"]);
    assert_eq!(out.status.code(), Some(2));

    // Command needing a missing section.
    let mut cfg = base_config();
    cfg.as_object_mut().unwrap().remove("qr");
    let out = run(&dir, &cfg, &["qr"]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn qr_sweep_gamma_near_one_in_d1() {
    let dir = workdir("qr");
    let out = run(&dir, &base_config(), &["qr"]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.join("out/qr_sweep.csv")).unwrap();
    let mut data_rows = 0;
    for line in csv.lines().skip(2) {
        let fields: Vec<&str> = line.split(',').collect();
        let gamma: f64 = fields[4].parse().unwrap();
        assert!((1.0 - 1e-9..=1.02).contains(&gamma), "gamma_sq {gamma}");
        assert_eq!(fields[5], "false");
        data_rows += 1;
    }
    assert_eq!(data_rows, 2 + 4 + 8 + 1); // generations 0..=3
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn condh_all_hold_for_coordinate_cosines() {
    let dir = workdir("condh");
    let mut cfg = base_config();
    // d = 2 sum of cosines.
    cfg["field"]["phi"] = serde_json::json!({"d": 2, "terms": [
        {"k": [1, 0], "re": 0.5, "im": 0.0},
        {"k": [-1, 0], "re": 0.5, "im": 0.0},
        {"k": [0, 1], "re": 0.5, "im": 0.0},
        {"k": [0, -1], "re": 0.5, "im": 0.0}
    ]});
    cfg["lattice"]["root_corner"] = serde_json::json!([0.0, 0.0]);
    let out = run(&dir, &cfg, &["condh"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("out/condh.json")).unwrap())
            .unwrap();
    assert_eq!(report["counts"]["fails"], 0);
    assert_eq!(report["counts"]["inconclusive"], 0);
    let total = report["directions"].as_array().unwrap().len();
    let held = report["counts"]["holds_via_derivative"].as_u64().unwrap()
        + report["counts"]["holds_via_extremum"].as_u64().unwrap();
    assert_eq!(held as usize, total);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn cantor_emits_all_three_reports() {
    let dir = workdir("cantor");
    let out = run(&dir, &base_config(), &["cantor"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["cantor_tree.json", "ray_check.json", "dim_bound.json"] {
        let v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(dir.join("out").join(name)).unwrap())
                .unwrap();
        assert!(v["config_hash"].is_string(), "{name} missing hash");
    }
    let tree: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("out/cantor_tree.json")).unwrap())
            .unwrap();
    assert_eq!(tree["validation"]["maximality_ok"], true);
    assert_eq!(tree["validation"]["disjointness_ok"], true);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn cantor_constant_field_reports_no_escape() {
    let dir = workdir("cantor-const");
    let mut cfg = base_config();
    // Zero polynomial: gradient never escapes.
    cfg["field"]["phi"] = serde_json::json!({"d": 1, "terms": []});
    let out = run(&dir, &cfg, &["cantor"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("no stopping escape"));
    let bound: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("out/dim_bound.json")).unwrap())
            .unwrap();
    assert!(bound["bound"].is_null());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn seminorms_and_ray_and_survey_reports() {
    let dir = workdir("misc");
    for cmd in ["seminorms", "ray", "survey"] {
        let out = run(&dir, &base_config(), &[cmd]);
        assert!(out.status.success(), "{cmd}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let sem: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("out/seminorms.json")).unwrap())
            .unwrap();
    assert!(sem["zygmund"]["value"].as_f64().unwrap() > 0.0);
    assert!(sem["bloch"]["value"].as_f64().unwrap() > 0.0);

    let rays = std::fs::read_to_string(dir.join("out/rays.csv")).unwrap();
    assert!(rays.lines().count() > 30);

    let summary: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.join("out/survey_summary.json")).unwrap(),
    )
    .unwrap();
    let entries = summary["entries"].as_array().unwrap();
    assert!(!entries.is_empty());
    // Monotone exceedance fractions along the floors for the one threshold.
    let fracs: Vec<f64> = entries
        .iter()
        .map(|e| e["exceedance_fraction"].as_f64().unwrap())
        .collect();
    for w in fracs.windows(2) {
        assert!(w[1] >= w[0]);
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn survey_statistical_consistency_under_doubling() {
    // Doubling the sample count keeps exceedance fractions within the
    // binomial 95% envelope of the first run.
    let dir = workdir("survey-double");
    let cfg = base_config();
    let out = run(&dir, &cfg, &["survey"]);
    assert!(out.status.success());
    let first: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.join("out/survey_summary.json")).unwrap(),
    )
    .unwrap();

    let mut cfg2 = cfg.clone();
    cfg2["sampling"]["count"] = serde_json::json!(60);
    cfg2["sampling"]["thresholds"] = serde_json::json!([first["entries"][0]["threshold"]]);
    let mut cfg1 = cfg.clone();
    cfg1["sampling"]["thresholds"] = serde_json::json!([first["entries"][0]["threshold"]]);
    // Re-run both with the SAME explicit threshold so fractions compare.
    let out = run(&dir, &cfg1, &["survey"]);
    assert!(out.status.success());
    let base: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.join("out/survey_summary.json")).unwrap(),
    )
    .unwrap();
    let out = run(&dir, &cfg2, &["survey"]);
    assert!(out.status.success());
    let doubled: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.join("out/survey_summary.json")).unwrap(),
    )
    .unwrap();

    let n1 = 30.0f64;
    for (e1, e2) in base["entries"]
        .as_array()
        .unwrap()
        .iter()
        .zip(doubled["entries"].as_array().unwrap())
    {
        let p1 = e1["exceedance_fraction"].as_f64().unwrap();
        let p2 = e2["exceedance_fraction"].as_f64().unwrap();
        let sigma = (p1.max(0.05) * (1.0 - p1.min(0.95)) / n1).sqrt();
        assert!(
            (p1 - p2).abs() <= 1.96 * sigma + 1e-12,
            "fractions {p1} vs {p2} beyond the binomial envelope"
        );
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn selftest_passes_and_missing_config_exits_2() {
    let dir = workdir("selftest");
    let out = run(&dir, &base_config(), &["selftest"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("out/selftest.json")).unwrap())
            .unwrap();
    assert_eq!(report["pass"], true);

    let out = Command::new(bin()).arg("selftest").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}
