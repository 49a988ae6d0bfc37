use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parafermion"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).expect("json output")
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

#[test]
fn braid_suite_passes_at_d3() {
    let o = run(&["verify", "--suite", "braid", "--d", "3"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("b1 b2 b1 = b2 b1 b2"));
    assert!(out.contains("braid generators unitary"));
    assert!(out.contains("closed-form channel sum"));
    assert!(!out.contains("FAIL"));
}

#[test]
fn kitaev_triple_product_confirmed() {
    let o = run(&[
        "verify",
        "--suite",
        "pauli",
        "--d",
        "2",
        "--variant",
        "kitaev",
        "--json",
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let checks = v["result"]["reports"][0]["checks"].as_array().unwrap();
    let triple = checks
        .iter()
        .find(|c| c["name"].as_str().unwrap().ends_with("XYZ = i c1c2c3c4"))
        .expect("triple product check");
    assert_eq!(triple["pass"], true);
}

#[test]
fn order_one_is_a_usage_error() {
    let o = run(&["verify", "--suite", "algebra", "--d", "1"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("d must be at least 2"));
}

#[test]
fn unknown_suite_is_a_usage_error() {
    assert_eq!(code(&run(&["verify", "--suite", "topology"])), 2);
}

#[test]
fn unknown_flag_is_a_usage_error() {
    assert_eq!(code(&run(&["verify", "--colour"])), 2);
}

#[test]
fn every_suite_passes_at_d2() {
    for suite in ["algebra", "fock", "braid", "pauli", "diagram", "models"] {
        let o = run(&["verify", "--suite", suite, "--d", "2", "--seed", "11"]);
        assert_eq!(code(&o), 0, "{suite}: {}", stdout(&o));
        assert!(stdout(&o).starts_with("seed 11\n"));
    }
}

#[test]
fn relay_three_helpers_gives_delta_minus_eight() {
    let o = run(&["simulate", "relay", "--d", "2", "--helpers", "3", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["result"]["scalar"]["exact"]["delta_exp"], -8);
}

#[test]
fn distribute_zero_zero_amplitudes() {
    let o = run(&[
        "simulate",
        "distribute",
        "--d",
        "2",
        "--input",
        "0,0",
        "--json",
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let amps = v["result"]["amplitudes"].as_array().unwrap();
    let pre = (-std::f64::consts::PI / 8.0, 1.0 / 2f64.sqrt());
    let (re, im) = (pre.1 * pre.0.cos(), pre.1 * pre.0.sin());
    let want = [[re, im], [0.0, 0.0], [0.0, 0.0], [-re, -im]];
    for (a, w) in amps.iter().zip(want) {
        assert!((a[0].as_f64().unwrap() - w[0]).abs() < 1e-9);
        assert!((a[1].as_f64().unwrap() - w[1]).abs() < 1e-9);
    }
}

#[test]
fn swap_over_budget_is_a_resource_error() {
    let o = run(&["simulate", "swap", "--d", "5", "--budget", "100"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}

#[test]
fn relay_without_helpers_is_rejected() {
    assert_eq!(code(&run(&["simulate", "relay", "--helpers", "0"])), 2);
}

#[test]
fn malformed_input_pair_is_rejected() {
    assert_eq!(code(&run(&["simulate", "distribute", "--input", "1"])), 2);
}

#[test]
fn other_protocols_pass() {
    for p in ["swap", "double-braid", "controlled-x", "controlled-y"] {
        let o = run(&["simulate", p, "--d", "2"]);
        assert_eq!(code(&o), 0, "{p}: {}", stdout(&o));
    }
}

#[test]
fn reduce_swap_fixture() {
    let o = run(&[
        "eval",
        "--file",
        &fixture("swap_d2.json"),
        "--mode",
        "reduce",
        "--json",
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let r = &v["result"];
    assert_eq!(
        r["normal_form_text"],
        "d=2 wires=2 prefactor=delta^-2 [X1+]"
    );
    assert_eq!(r["accumulated_scalar"]["delta_exp"], -2);
    let c = r["accumulated_scalar"]["coeff"].as_array().unwrap();
    let modulus = c[0].as_f64().unwrap().hypot(c[1].as_f64().unwrap());
    assert!((modulus - 1.0).abs() < 1e-9);
    let trace = r["trace"].as_array().unwrap();
    assert!(!trace.is_empty());
}

#[test]
fn identity_wire_matrix() {
    let o = run(&[
        "eval",
        "--file",
        &fixture("identity_wire_d2.json"),
        "--json",
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let m = &v["result"]["matrix"];
    assert_eq!(
        m,
        &serde_json::json!([[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]])
    );
}

#[test]
fn malformed_slice_reports_its_position() {
    let o = run(&["eval", "--file", &fixture("malformed/unknown_kind.json")]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr).to_string();
    assert!(err.contains("slices[1]"), "{err}");
    assert!(err.contains("twistor"), "{err}");
}

#[test]
fn missing_file_is_a_usage_error() {
    assert_eq!(
        code(&run(&["eval", "--file", "/nonexistent/diagram.json"])),
        2
    );
}

#[test]
fn json_output_is_deterministic() {
    let args = [
        "verify", "--suite", "diagram", "--d", "2", "--seed", "5", "--json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["seed"], 5);
    let args = ["simulate", "relay", "--d", "2", "--helpers", "2", "--json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn failing_verification_exits_one() {
    let o = run(&[
        "verify",
        "--suite",
        "braid",
        "--d",
        "3",
        "--tolerance",
        "1e-300",
    ]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));
}
