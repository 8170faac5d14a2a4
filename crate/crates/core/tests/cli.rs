use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};
use tempfile::TempDir;

struct Run {
    code: i32,
    report: Value,
}

fn comax(args: &[&str]) -> Run {
    let output = Command::new(env!("CARGO_BIN_EXE_comax")).args(args).output().unwrap();
    let report = serde_json::from_slice(&output.stdout)
        .unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&output.stdout)));
    Run {
        code: output.status.code().unwrap(),
        report,
    }
}

fn status(args: &[&str]) -> Option<i32> {
    Command::new(env!("CARGO_BIN_EXE_comax"))
        .args(args)
        .output()
        .unwrap()
        .status
        .code()
}

fn file(dir: &TempDir, name: &str, value: &Value) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, value.to_string()).unwrap();
    path
}

fn s(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn dirac0() -> Value {
    json!({ "size": 2, "values": [
        { "set": [], "value": 0.0 },
        { "set": [0], "value": 1.0 },
        { "set": [1], "value": 0.0 },
        { "set": [0, 1], "value": 1.0 },
    ]})
}

#[test]
fn integrate_dirac() {
    let dir = TempDir::new().unwrap();
    let c = file(&dir, "c.json", &dirac0());
    let phi = file(&dir, "phi.json", &json!([3.0, -2.0]));
    let run = comax(&["--command", "integrate", "--in", s(&c), "--in", s(&phi)]);
    assert_eq!(run.code, 0);
    assert_eq!(run.report["command"], "integrate");
    assert_eq!(run.report["value"], 3.0);
}

#[test]
fn compare_integrals() {
    let dir = TempDir::new().unwrap();
    let c = file(
        &dir,
        "c.json",
        &json!({ "size": 2, "values": [
            { "set": [0], "value": 0.5 },
            { "set": [1], "value": 0.25 },
            { "set": [], "value": 0.0 },
            { "set": [0, 1], "value": 1.0 },
        ]}),
    );
    let phi = file(&dir, "phi.json", &json!([1.0, 0.0]));
    let run = comax(&["--command", "compare-integrals", "--in", s(&c), "--in", s(&phi)]);
    assert_eq!(run.code, 0);
    let values = &run.report["values"];
    assert!((values["choquet"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((values["sugeno"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((values["max_plus"].as_f64().unwrap() - (1.0 + 0.5f64.ln())).abs() < 1e-12);

    let wide = file(&dir, "wide.json", &json!([2.0, -1.0]));
    let run = comax(&["--command", "compare-integrals", "--in", s(&c), "--in", s(&wide)]);
    assert_eq!(run.code, 0);
    assert!(run.report["values"]["sugeno"].is_null());
    assert!(run.report["note"].is_string());
}

#[test]
fn seeded_roundtrip_and_determinism() {
    let args = ["--command", "roundtrip", "--seed", "11", "--size", "4"];
    let run = comax(&args);
    assert_eq!(run.code, 0);
    assert!(run.report["max_deviation"].as_f64().unwrap() < 1e-9);
    assert_eq!(run.report["verdicts"][0]["samples"], 1000);
    assert_eq!(comax(&args).report, run.report);
}

#[test]
fn properties_flag_max_plus_min() {
    let dir = TempDir::new().unwrap();
    let f = file(&dir, "f.json", &json!({ "type": "max_plus_min", "size": 3 }));
    let run = comax(&[
        "--command",
        "properties",
        "--in",
        s(&f),
        "--seed",
        "5",
        "--trials",
        "200",
    ]);
    assert_eq!(run.code, 1);
    let plus = run.report["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .find(|v| v["name"] == "plus_homogeneous")
        .unwrap();
    assert_eq!(plus["passed"], false);
    assert!(!run.report["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn properties_of_a_capacity_pass() {
    let dir = TempDir::new().unwrap();
    let c = file(&dir, "c.json", &dirac0());
    let run = comax(&[
        "--command",
        "properties",
        "--in",
        s(&c),
        "--seed",
        "5",
        "--trials",
        "200",
    ]);
    assert_eq!(run.code, 0, "{}", run.report);
}

#[test]
fn reconstruct_and_witness() {
    let dir = TempDir::new().unwrap();
    let f = file(&dir, "f.json", &json!({ "type": "min", "size": 2 }));
    let run = comax(&["--command", "reconstruct", "--in", s(&f)]);
    assert_eq!(run.code, 0);
    assert_eq!(run.report["capacity"]["size"], 2);

    // reconstruction does not audit the axioms; max + min reads back as the unanimity capacity
    let unaudited = file(&dir, "f2.json", &json!({ "type": "max_plus_min", "size": 2 }));
    let run = comax(&["--command", "reconstruct", "--in", s(&unaudited)]);
    assert_eq!(run.code, 0);
    assert_eq!(run.report["capacity"]["values"][1]["value"], 0.0);

    let c = file(
        &dir,
        "c.json",
        &json!({ "size": 2, "values": [
            { "set": [], "value": 0.0 },
            { "set": [0], "value": 0.5 },
            { "set": [1], "value": 0.25 },
            { "set": [0, 1], "value": 1.0 },
        ]}),
    );
    let run = comax(&["--command", "witness", "--in", s(&c)]);
    assert_eq!(run.code, 0);
    assert_eq!(run.report["is_possibility"], false);
    assert!(run.report["witnesses"][0]["gap"].as_f64().unwrap() > 0.69);
}

#[test]
fn category_commands() {
    let run = comax(&["--command", "naturality", "--seed", "3", "--trials", "50"]);
    assert_eq!(run.code, 0);
    assert_eq!(run.report["verdicts"].as_array().unwrap().len(), 16);

    let run = comax(&[
        "--command",
        "monad-laws",
        "--seed",
        "3",
        "--trials",
        "50",
        "--size",
        "3",
    ]);
    assert_eq!(run.code, 0, "{}", run.report);

    let dir = TempDir::new().unwrap();
    let outer = file(
        &dir,
        "outer.json",
        &json!({
            "weights": [1.0, 0.5],
            "supports": [{ "weights": [1.0, 0.0] }, { "weights": [0.2, 1.0] }],
        }),
    );
    let run = comax(&["--command", "monad-laws", "--in", s(&outer)]);
    assert_eq!(run.code, 0, "{}", run.report);
    assert_eq!(run.report["verdicts"][0]["name"], "closed_form");
}

#[test]
fn input_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let phi = file(&dir, "phi.json", &json!([1.0]));
    let run = comax(&["--command", "integrate", "--in", s(&bad), "--in", s(&phi)]);
    assert_eq!(run.code, 2);
    assert_eq!(run.report["error"]["kind"], "malformed_json");

    let c = file(&dir, "c.json", &dirac0());
    let run = comax(&["--command", "integrate", "--in", s(&c), "--in", s(&phi)]);
    assert_eq!(run.code, 2);
    assert_eq!(run.report["error"]["kind"], "space_size_mismatch");

    let run = comax(&["--command", "properties", "--in", s(&c)]);
    assert_eq!(run.code, 2);
    let run = comax(&["--command", "roundtrip", "--seed", "1", "--tol=-1"]);
    assert_eq!(run.code, 2);
    assert_eq!(run.report["error"]["kind"], "usage");
    assert_eq!(status(&["--command", "nonsense"]), Some(2));
    assert_eq!(status(&["--command", "integrate", "--in"]), Some(2));
}

#[test]
fn report_goes_to_out_file() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("report.json");
    let status = Command::new(env!("CARGO_BIN_EXE_comax"))
        .args([
            "--command",
            "roundtrip",
            "--seed",
            "1",
            "--size",
            "2",
            "--trials",
            "10",
            "--out",
            s(&out),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["seed"], 1);
}
