//! End-to-end runs of the `tcc` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn tcc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tcc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json report")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

#[test]
fn default_patch_passes_the_algebra() {
    let o = tcc(&["verify-algebra", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json(&o);
    assert_eq!(r["schema"], "tcc.report/1");
    assert_eq!(r["passed"], true);
    assert_eq!(r["report"]["algebra"]["complete_plaquettes"], 1);
    assert_eq!(r["fingerprint"].as_str().unwrap().len(), 64);
    for c in r["report"]["algebra"]["checks"].as_array().unwrap() {
        assert_eq!(c["passed"], true, "{c}");
    }
}

#[test]
fn zero_couplings_pass_trivially() {
    let o = tcc(&["verify-algebra", "--jx", "0", "--jy", "0", "--jz", "0"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}

#[test]
fn torus_reports_two_global_dependencies() {
    let o = tcc(&[
        "verify-algebra", "--patch", "2x2", "--boundary", "periodic", "--format", "json",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rank = &json(&o)["report"]["algebra"]["rank"];
    assert_eq!(rank["rank"], 22);
    assert_eq!(rank["global_dependencies"], 2);
}

#[test]
fn corrupted_plaquette_names_the_identity() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("patch.json");
    let o = tcc(&["build-patch", "--out", file.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    doc["plaquettes"][0]["p1"][0][1] = "z".into();
    std::fs::write(&file, serde_json::to_string(&doc).unwrap()).unwrap();

    let o = tcc(&["verify-algebra", "--patch-file", file.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("[FAIL] P1 P2 P3 = -I"), "{out}");
    assert!(out.contains("result: FAIL"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["verify-algebra", "--patch", "0x3"],
        vec!["verify-algebra", "--patch", "banana"],
        vec!["verify-algebra", "--patch", "1x1", "--boundary", "periodic"],
        vec!["spectrum", "--jz", "NaN"],
        vec!["gates", "--scheme", "teleport"],
        vec!["braid", "--schedule", "/nonexistent/schedule.json"],
        vec!["frobnicate"],
    ] {
        let o = tcc(&args);
        assert_eq!(code(&o), 2, "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn oversized_spectrum_exits_three() {
    let o = tcc(&["spectrum", "--triangles", "9"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("capacity"));
}

#[test]
fn single_triangle_spectrum() {
    let o = tcc(&["spectrum", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json(&o);
    let m = &r["report"]["microscopic"];
    assert_eq!(m["eigenvalues"], serde_json::json!([-3.0, 1.0]));
    assert_eq!(m["degeneracies"], serde_json::json!([2, 6]));
    assert_eq!(r["report"]["equivalence"]["calibration"]["scale"], 4.0);
}

#[test]
fn two_triangle_mapping_deviation() {
    let o = tcc(&["spectrum", "--triangles", "2", "--jx", "0.7", "--jy", "1.3", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let eq = &json(&o)["report"]["equivalence"];
    assert!(eq["spectral_deviation"].as_f64().unwrap() <= 1e-10);
    assert!(eq["matrix_deviation"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn empty_couplings_give_a_flat_spectrum() {
    let o = tcc(&[
        "spectrum", "--triangles", "2", "--jx", "0", "--jy", "0", "--jz", "0", "--format", "json",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let m = &json(&o)["report"]["microscopic"];
    assert_eq!(m["eigenvalues"], serde_json::json!([0.0]));
    assert_eq!(m["degeneracies"], serde_json::json!([64]));
}

#[test]
fn all_gate_rows_match() {
    let o = tcc(&["gates", "--scheme", "all"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("16/16 truth-table rows match"), "{out}");
    assert!(out.contains("note: color-switch"));
    assert!(!out.contains("MISMATCH"));
}

#[test]
fn fusion_prints_a_cnot() {
    let o = tcc(&["gates", "--scheme", "fusion", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let s = &json(&o)["report"]["schemes"][0];
    assert!(s["cnot"]["deviation"].as_f64().unwrap() <= 1e-14);
    let m = s["cnot"]["matrix"].as_array().unwrap();
    assert_eq!(m.len(), 4);
    assert!((m[3][2].as_f64().unwrap() - 1.0).abs() < 1e-14);
}

#[test]
fn same_color_gate_is_refused() {
    let o = tcc(&["gates", "--scheme", "hopping", "--control", "g", "--target", "g"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("refused"), "{}", stdout(&o));
}

#[test]
fn braid_examples() {
    for (file, phase) in [("empty.json", 1), ("r_around_g.json", -1), ("r_around_r.json", 1)] {
        let f = fixture(file);
        let o = tcc(&["braid", "--schedule", f.to_str().unwrap(), "--cross-check", "--format", "json"]);
        assert_eq!(code(&o), 0, "{file}: {}", stderr(&o));
        assert_eq!(json(&o)["report"]["outcome"]["phase"], phase, "{file}");
    }
}

#[test]
fn derived_table_agrees() {
    let f = fixture("r_around_g.json");
    let o = tcc(&["braid", "--schedule", f.to_str().unwrap(), "--derived-table"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("phase: -1"));
}

#[test]
fn illegal_move_names_its_index() {
    let f = fixture("illegal.json");
    let o = tcc(&["braid", "--schedule", f.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("#1"), "{}", stderr(&o));
}

#[test]
fn json_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<Vec<u8>> = (0..2)
        .map(|k| {
            let file = dir.path().join(format!("r{k}.json"));
            let o = tcc(&[
                "verify-algebra", "--patch", "2x2", "--seed", "17", "--format", "json", "--out",
                file.to_str().unwrap(),
            ]);
            assert_eq!(code(&o), 0);
            std::fs::read(file).unwrap()
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    let r: Value = serde_json::from_slice(&runs[0]).unwrap();
    assert_eq!(r["seed"], 17);
}
