use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

struct Run {
    code: i32,
    report: Value,
    text: String,
}

fn run(args: &[&str], inputs: &[PathBuf]) -> Run {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_charvar"));
    cmd.args(args);
    for i in inputs {
        cmd.arg("--input").arg(i);
    }
    cmd.arg("--output").arg(&out);
    let status = cmd.output().unwrap();
    let text = std::fs::read_to_string(&out).unwrap_or_default();
    let report = serde_json::from_str(&text).unwrap_or(Value::Null);
    Run {
        code: status.status.code().unwrap(),
        report,
        text,
    }
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn validate_torus_with_separate_presentation() {
    let r = run(&["validate"], &[data("torus.json"), data("torus_diagonal.json")]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["status"], "pass");
    assert_eq!(r.report["representation"]["relator_residual"], 0.0);
    assert_eq!(r.report["tolerances"]["newton_tol"], 1e-12);
}

#[test]
fn cohomology_and_goldman_on_genus_two() {
    let r = run(&["cohomology"], &[data("genus2_sl2.json")]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["cohomology"]["dims"], serde_json::json!([9, 3, 6]));
    let g = run(&["goldman"], &[data("genus2_sl2.json"), data("trace_form.json")]);
    assert_eq!(g.code, 0);
    assert_eq!(g.report["gram"]["rank"], 6);
    assert!(g.report["gram"]["skewness"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn eta_on_the_torus() {
    let r = run(
        &["eta"],
        &[
            data("torus.json"),
            data("torus_diagonal.json"),
            data("torus_cocycles.json"),
        ],
    );
    assert_eq!(r.code, 0);
    let v = &r.report["value"];
    assert!((v[0].as_f64().unwrap() - 2.0).abs() < 1e-12 && v[1].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn invariance_suite_with_automorphisms() {
    let inputs = [
        data("torus.json"),
        data("torus_diagonal.json"),
        data("torus_swap.json"),
        data("torus_shear.json"),
    ];
    let r = run(&["suite-invariance", "--seed", "3"], &inputs);
    assert_eq!(r.code, 0, "{}", r.text);
    let endos = r.report["endomorphisms"].as_array().unwrap();
    assert_eq!(endos.len(), 2);
    assert!(endos.iter().all(|e| e["pass"] == true));

    let dir = tempfile::tempdir().unwrap();
    let wrong = write_temp(
        &dir,
        "wrong.json",
        r#"{"endomorphism": {"a": "b", "b": "a"}, "expected_ratio": 1.0}"#,
    );
    let r = run(
        &["suite-invariance", "--seed", "3"],
        &[data("torus.json"), data("torus_diagonal.json"), wrong],
    );
    assert_eq!(r.code, 1);
    assert_eq!(r.report["status"], "fail");

    let bogus = write_temp(&dir, "bogus.json", r#"{"endomorphism": {"a": "a a"}}"#);
    let r = run(&["suite-invariance", "--seed", "3"], &[data("genus2_sl2.json"), bogus]);
    assert_eq!(r.code, 2);
    assert_eq!(r.report["error"], "UnknownGenerator");
}

#[test]
fn basic_suite_pass_and_broken_chain_fail() {
    let r = run(
        &["suite-basic", "--seed", "1", "--trials", "20"],
        &[data("genus2_sl2.json")],
    );
    assert_eq!(r.code, 0);
    assert_eq!(r.report["suite"]["pass"], true);

    let dir = tempfile::tempdir().unwrap();
    let chain = write_temp(
        &dir,
        "chain.json",
        r#"{"degree": 2, "terms": [{"coeff": 1, "words": ["a1", "b1"]}]}"#,
    );
    let r = run(
        &["suite-basic", "--seed", "1", "--trials", "20"],
        &[data("genus2_sl2.json"), chain],
    );
    assert_eq!(r.code, 1);
    assert_eq!(r.report["status"], "fail");
    assert_eq!(r.report["suite"]["cycle_verified"], false);
}

#[test]
fn closedness_command() {
    let r = run(&["closedness"], &[data("genus2_sl2.json")]);
    assert_eq!(r.code, 0, "{}", r.text);
    assert_eq!(r.report["perturbed_control"]["detected"], true);
    assert_eq!(r.report["closedness_tol"], 1e-5);
}

#[test]
fn family_command_writes_csv_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("family.json");
    let go = || {
        Command::new(env!("CARGO_BIN_EXE_charvar"))
            .args(["family", "--seed", "9", "--trials", "2", "--input"])
            .arg(data("genus2_family.json"))
            .arg("--output")
            .arg(&out)
            .status()
            .unwrap()
    };
    assert!(go().success());
    let first = std::fs::read(&out).unwrap();
    let csv = std::fs::read_to_string(dir.path().join("family.csv")).unwrap();
    assert_eq!(csv.lines().count(), 9);
    assert!(go().success());
    assert_eq!(first, std::fs::read(&out).unwrap());
}

#[test]
fn free_group_demo_command() {
    let r = run(&["demo-free-group", "--seed", "4"], &[]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["nonclosed"], true);
    assert_eq!(r.report["boundary_pass"], true);
}

#[test]
fn invalid_inputs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let garbage = write_temp(&dir, "garbage.json", "{ not json");
    let r = run(&["validate"], &[garbage]);
    assert_eq!(r.code, 2);
    assert_eq!(r.report["error"], "JsonError");

    let unknown = write_temp(&dir, "unknown.json", r#"{"hello": 1}"#);
    assert_eq!(run(&["validate"], &[unknown]).report["error"], "InvalidInput");

    let bad = write_temp(
        &dir,
        "bad.json",
        r#"{"group": {"kind": "SL", "n": 2}, "images": {"a": [[[1,0],[1,0]],[[0,0],[1,0]]], "b": [[[1,0],[0,0]],[[1,0],[1,0]]]}}"#,
    );
    let r = run(&["validate"], &[data("torus.json"), bad]);
    assert_eq!(r.code, 2);
    assert_eq!(r.report["error"], "InvalidRepresentation");

    let r = run(&["suite-basic"], &[data("genus2_sl2.json")]);
    assert_eq!(r.code, 2);
    assert!(r.report["detail"].as_str().unwrap().contains("--seed"));

    let r = run(&["cohomology", "--tol-rank", "-1"], &[data("genus2_sl2.json")]);
    assert_eq!(r.code, 2);

    let r = run(&["goldman"], &[data("torus.json")]);
    assert_eq!(r.code, 2);
}
