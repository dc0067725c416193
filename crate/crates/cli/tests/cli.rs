//! Binary-level tests: report schemas, preset resolution, exit codes,
//! deterministic ordering, and the no-floating-point guarantee on every
//! CLI-visible number.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_fanoforge")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn presets_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../presets")
}

/// Any digits '.' digits substring would be floating-point leakage.
fn assert_no_float_formatting(text: &str) {
    let bytes = text.as_bytes();
    for i in 1..bytes.len().saturating_sub(1) {
        if bytes[i] == b'.' && bytes[i - 1].is_ascii_digit() && bytes[i + 1].is_ascii_digit() {
            panic!("float-like token in output: ...{}...", &text[i.saturating_sub(8)..(i + 8).min(text.len())]);
        }
    }
}

#[test]
fn construct_worked_example_json_schema() {
    let file = presets_dir().join("ample-k.json");
    let out = run(&[
        "construct",
        "--surface",
        file.to_str().unwrap(),
        "--ks2",
        "9",
        "--p",
        "3",
        "--n",
        "3",
        "--d",
        "10",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let body = stdout(&out);
    let v: serde_json::Value = serde_json::from_str(&body).expect("valid JSON");
    assert_eq!(v["deg_paper"], "216");
    assert_eq!(v["deg_geom"], "216");
    assert_eq!(v["family_dim"], 20);
    assert_eq!(v["ext_space_dim"], 9);
    assert_eq!(v["chern"]["c1"][0], "-9");
    assert_eq!(v["chern"]["c2"], "0");
    assert_eq!(v["extension"]["lenZ"], 10);
    assert_eq!(v["antiK"], "6*A + 2*H");
    assert_eq!(v["cover"]["degree_geom"], "504");
    assert_eq!(v["cover"]["degree_paper"], "1800");
    assert_eq!(v["cyclic"]["m"], 4);
    assert!(v["certificates"].as_array().map(|a| !a.is_empty()).unwrap_or(false));
    assert!(v["locally_free"].as_bool().unwrap());
    assert_no_float_formatting(&body);
}

#[test]
fn curve_raynaud_matches_worked_values() {
    let out = run(&["curve", "raynaud", "--p", "3", "--e", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["dz"], 18);
    assert_eq!(v["genus"], 10);
    assert_eq!(v["h1"], 12);
    assert_eq!(v["meets_bound"], true);
}

#[test]
fn curve_errors_map_to_exit_codes() {
    // AmbiguousRange -> invalid input class -> exit 2
    let out = run(&["curve", "rr", "--genus", "10", "--deg", "5"]);
    assert_eq!(out.status.code(), Some(2));
    // Infeasible raynaud parameters -> exit 3
    let out = run(&["curve", "raynaud", "--p", "3", "--e", "1"]);
    assert_eq!(out.status.code(), Some(3));
    // p = 2 rejected by the tate formula
    let out = run(&["curve", "tate", "--p", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_suite_exits_zero_per_mode() {
    for mode in ["paper", "geom", "both"] {
        let out = run(&["verify", "--mode", mode, "--cases", "50"]);
        assert_eq!(out.status.code(), Some(0), "verify --mode {mode}");
        let body = stdout(&out);
        assert!(body.contains("0 failed"), "mode {mode}: {body}");
    }
}

#[test]
fn verify_json_reports_checks() {
    let out = run(&["verify", "--cases", "25", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["failed"], 0);
    assert!(v["checks"].as_array().unwrap().len() >= 15);
}

#[test]
fn table_rows_sorted_and_exact() {
    let out = run(&[
        "table",
        "--surface",
        "ample-k",
        "--ks2",
        "9",
        "--n-min",
        "3",
        "--n-max",
        "5",
        "--d-min",
        "1",
        "--d-max",
        "30",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let body = stdout(&out);
    let rows: Vec<serde_json::Value> = serde_json::from_str(&body).unwrap();
    assert_eq!(rows.len(), 3 * 30);
    let mut last = (0u64, 0u64);
    for row in &rows {
        let key = (row["n"].as_u64().unwrap(), row["d"].as_u64().unwrap());
        assert!(key > last, "rows sorted by (n, d)");
        last = key;
    }
    let feasible: Vec<_> = rows.iter().filter(|r| r["feasible"] == true).collect();
    assert!(feasible.iter().any(|r| r["n"] == 3 && r["d"] == 10 && r["deg_paper"] == "216"));
    assert!(feasible.iter().any(|r| r["n"] == 3 && r["d"] == 22));
    assert_no_float_formatting(&body);
}

#[test]
fn search_worked_value() {
    let out = run(&[
        "search", "--surface", "ample-k", "--ks2", "9", "--target", "1000", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["results"][0]["mode"], "paper-formal");
    assert_eq!(v["results"][0]["n"], 5);
    assert_eq!(v["results"][0]["degree"], "1224");
}

#[test]
fn eval_reports_both_modes_with_exact_rationals() {
    let out = run(&[
        "eval",
        "--surface",
        "ample-k",
        "--ks2",
        "9",
        "--expr",
        "H^3 + 1/2*H*pt",
        "--c1",
        "-9*A",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let body = stdout(&out);
    let v: serde_json::Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["results"][0]["mode"], "paper-formal");
    assert_eq!(v["results"][0]["degree"], "-161/2");
    assert_eq!(v["results"][1]["mode"], "geometric");
    assert_eq!(v["results"][1]["degree"], "163/2");
    assert_no_float_formatting(&body);
}

#[test]
fn preset_dir_env_var_resolves_names() {
    let out = Command::new(bin())
        .env("FANOFORGE_PRESET_DIR", presets_dir())
        .args([
            "construct", "--surface", "raynaud", "--ks2", "9", "--p", "3", "--n", "3", "--d",
            "10", "--format", "json",
        ])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["input"]["char_p"], 3);
    assert_eq!(v["deg_paper"], "216");
}

#[test]
fn builtin_presets_match_bundled_files() {
    // the files and the in-code constructors must describe the same models
    let p2_file = std::fs::read_to_string(presets_dir().join("p2.json")).unwrap();
    let from_file = fanoforge_core::SurfaceModel::from_json(&p2_file, None).unwrap();
    assert_eq!(from_file, fanoforge_core::SurfaceModel::p2());

    let ak_file = std::fs::read_to_string(presets_dir().join("ample-k.json")).unwrap();
    let from_file = fanoforge_core::SurfaceModel::from_json(&ak_file, Some(9)).unwrap();
    assert_eq!(from_file, fanoforge_core::SurfaceModel::ample_k(9).unwrap());

    let ray_file = std::fs::read_to_string(presets_dir().join("raynaud.json")).unwrap();
    let from_file = fanoforge_core::SurfaceModel::from_json(&ray_file, Some(9)).unwrap();
    assert_eq!(from_file, fanoforge_core::SurfaceModel::raynaud(9, 3).unwrap());
}

#[test]
fn missing_ks2_for_normalized_presets_is_invalid() {
    let out = run(&["construct", "--surface", "ample-k", "--p", "3", "--n", "3", "--d", "10"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["search", "--surface", "raynaud", "--target", "100"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn p2_preset_rejects_construction() {
    // K_(P2) is anti-ample; the splitting recipe requires ample K_S
    let out = run(&["construct", "--surface", "p2", "--p", "3", "--n", "3", "--d", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_surface_is_invalid_input() {
    let out = run(&["search", "--surface", "nonexistent", "--target", "10"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("unknown surface"), "{stderr}");
}

#[test]
fn fano_bidegree_cli() {
    let out = run(&["fano-bidegree", "--p", "5", "--n", "4", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["fano"], false);
    let out = run(&["fano-bidegree", "--p", "2", "--n", "7", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["fano"], true);
}

#[test]
fn no_float_formatting_across_commands() {
    let commands: Vec<Vec<&str>> = vec![
        vec!["curve", "raynaud", "--p", "5", "--e", "2", "--format", "json"],
        vec!["curve", "tate", "--p", "7", "--format", "json"],
        vec!["curve", "rr", "--genus", "10", "--deg", "-3", "--format", "json"],
        vec![
            "search", "--surface", "ample-k", "--ks2", "1", "--target", "216", "--mode", "both",
            "--format", "json",
        ],
        vec![
            "eval", "--surface", "ample-k", "--ks2", "9", "--expr", "1/3*H + 5/7*A", "--format",
            "json",
        ],
        vec!["fano-bidegree", "--p", "3", "--n", "8", "--format", "json"],
    ];
    for args in commands {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "command {args:?}");
        assert_no_float_formatting(&stdout(&out));
    }
}

#[test]
fn custom_model_file_loads() {
    let dir = std::env::temp_dir().join("fanoforge-test-models");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("hyperbolic.json");
    std::fs::write(
        &path,
        r#"{
            "name": "hyperbolic",
            "rank": 2,
            "gram": [[2, 3], [3, -1]],
            "canonical": [2, 0],
            "ample_gens": [[1, 0]],
            "char_p": 0,
            "basis_names": ["a", "b"]
        }"#,
    )
    .unwrap();
    let out = run(&[
        "eval",
        "--surface",
        path.to_str().unwrap(),
        "--expr",
        "K*a + 2*b*a",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // K.a = 2*2 = 4 points, b.a = 3 points: 4 + 6 = 10 pt, degree-3 part zero
    assert_eq!(v["results"][0]["normal_form"], "10*pt");
}
