use std::path::Path;
use std::process::Command;

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_commitment-limits");

fn run(args: &[&str]) -> (Value, i32) {
    let out = Command::new(BIN).args(args).output().expect("binary runs");
    let code = out.status.code().unwrap_or(-1);
    let text = String::from_utf8(out.stdout).unwrap();
    let json = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text} {}", String::from_utf8_lossy(&out.stderr)));
    (json, code)
}

fn check_schema(name: &str, doc: &Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.v1.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let v = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = v.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}");
}

fn set_bounds(v: &Value) -> Vec<(f64, f64)> {
    v.as_array().unwrap().iter().map(|p| (p["lo"].as_f64().unwrap(), p["hi"].as_f64().unwrap())).collect()
}

#[test]
fn analyze_duopoly_four_fifths() {
    let (j, code) = run(&["analyze", "--family", "duopoly", "--r", "0.8", "--d", "0"]);
    check_schema("analyze", &j);
    assert_eq!(code, 0);
    assert_eq!(set_bounds(&j["equilibria"]["cournot"]), vec![(0.454545454545, 0.454545454545)]);
    assert_eq!(set_bounds(&j["plausibility"]["simple"])[0].0, 0.454545454545);
}

#[test]
fn analyze_coordination_simple_set() {
    let (j, _) = run(&["analyze", "--family", "coordination", "--a", "0"]);
    check_schema("analyze", &j);
    assert_eq!(set_bounds(&j["plausibility"]["simple"]), vec![(0.0, 0.0), (0.5, 0.5), (1.0, 1.0)]);
}

#[test]
fn analyze_rc_gate_exits_two() {
    let (j, code) = run(&["analyze", "--family", "duopoly", "--r", "1.2", "--d", "0"]);
    check_schema("analyze", &j);
    assert_eq!(code, 2);
    assert_eq!(j["rc"]["rc1"], Value::Bool(false));
    assert!(j["plausibility"]["p_plausible"].is_null());
}

#[test]
fn output_is_byte_identical() {
    let args = ["analyze", "--family", "duopoly", "--r", "0.8", "--d", "0.3"];
    let a = Command::new(BIN).args(args).output().unwrap().stdout;
    let b = Command::new(BIN).args(args).output().unwrap().stdout;
    assert_eq!(a, b);
}

#[test]
fn bad_input_exits_one() {
    let out = Command::new(BIN).args(["analyze", "--family", "duopoly"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = Command::new(BIN).args(["oracle", "--family", "duopoly", "--r", "0.8", "--cst", "[0,1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn oracle_campaign_has_no_discrepancy() {
    let (j, code) = run(&["oracle", "--family", "duopoly", "--r", "0.8", "--d", "0", "--grid-n", "201"]);
    check_schema("oracle", &j);
    assert_eq!(code, 0);
    assert_eq!(j["campaign"]["discrepancies"].as_array().unwrap().len(), 0);
}

#[test]
fn oracle_literal_two_equilibria() {
    let (j, _) = run(&["oracle", "--family", "duopoly", "--r", "0.8", "--cst", "(0.125,0.3333]|[0,0.125]u(0.3333,1.6667]"]);
    check_schema("oracle", &j);
    let xs: Vec<f64> = j["leader_actions"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    let h = j["h"].as_f64().unwrap();
    assert_eq!(xs.len(), 2);
    assert!((xs[0] - 1.0 / 3.0).abs() <= h && (xs[1] - 5.0 / 11.0).abs() <= h, "{xs:?}");
    let (j, _) = run(&["oracle", "--family", "duopoly", "--r", "0.8", "--cst", "cournot"]);
    assert_eq!(j["leader_actions"], serde_json::json!([0.454545454545]));
}

#[test]
fn design_commands() {
    let (j, code) = run(&["design", "--family", "duopoly", "--r", "0.8", "--d", "0", "--objective", "leader", "--class", "all"]);
    check_schema("design", &j);
    assert_eq!(code, 0);
    assert_eq!(j["solution"]["optimal_actions"], serde_json::json!([1.0]));
    assert_eq!(j["solution"]["witnesses"][0]["cst"], "stackelberg");

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let status = Command::new(BIN)
        .args(["design", "--family", "duopoly", "--r", "0.8", "--d", "0", "--objective", "cs", "--class", "all", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let j: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    check_schema("design", &j);
    let w = &j["solution"]["witnesses"][0];
    assert_eq!(w["cst"].as_str().unwrap().split('|').count(), 3);
    assert_eq!(w["verified"], Value::Bool(true));
}

#[test]
fn refine_check_coordination() {
    let (j, code) = run(&[
        "refine-check", "--family", "coordination", "--a", "0.01", "--cst", "{0}|(0,1)|{1}", "--refined", "[0.05,0.95]|*",
    ]);
    check_schema("refine-check", &j);
    assert_eq!(code, 0);
    assert_eq!(j["worse_refinement_exists"], Value::Bool(true));
    assert_eq!(j["refined"]["is_finer"], Value::Bool(true));
    assert_eq!(j["refined"]["is_worse"], Value::Bool(true));
}

#[test]
fn plot_writes_deterministic_svgs_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("curves.csv");
    let (j, code) = run(&[
        "plot", "--family", "duopoly", "--r", "0.8", "--d", "0", "--out", dir.path().to_str().unwrap(), "--csv",
        csv.to_str().unwrap(),
    ]);
    check_schema("plot", &j);
    assert_eq!(code, 0);
    let gamma = std::fs::read_to_string(dir.path().join("gamma.svg")).unwrap();
    assert!(gamma.contains("min gamma(S) 0.277778"));
    let first = std::fs::read(dir.path().join("u.svg")).unwrap();
    run(&["plot", "--family", "duopoly", "--r", "0.8", "--d", "0", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(first, std::fs::read(dir.path().join("u.svg")).unwrap());
    let mut rdr = csv::Reader::from_path(&csv).unwrap();
    assert_eq!(rdr.headers().unwrap(), vec!["x", "U", "phi", "gamma"]);
    assert_eq!(rdr.records().count(), 401);

    let (_, _) = run(&["plot", "--family", "duopoly", "--r", "1.2", "--d", "0", "--out", dir.path().to_str().unwrap()]);
    let phi = std::fs::read_to_string(dir.path().join("phi.svg")).unwrap();
    for label in ["fixed 0<", "fixed 0.555556<", "fixed 1.25<"] {
        assert!(phi.contains(label), "{label}");
    }
    run(&["plot", "--family", "coordination", "--a", "0", "--out", dir.path().to_str().unwrap()]);
    let u = std::fs::read_to_string(dir.path().join("u.svg")).unwrap();
    assert_eq!(u.matches("<circle").count(), 3);
}

#[test]
fn thread_cap_is_honoured() {
    let out = Command::new(BIN)
        .env("COMMITMENT_LIMITS_THREADS", "1")
        .args(["analyze", "--family", "coordination"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
