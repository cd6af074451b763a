use std::process::{Command, Output};

use serde_json::Value;

fn run(bin: &str, args: &[&str]) -> Output {
    Command::new(bin)
        .args(args)
        .env_remove("SINGCALC_MAX_DEG")
        .output()
        .expect("binary runs")
}

fn tpcalc(args: &[&str]) -> Output {
    run(env!("CARGO_BIN_EXE_tpcalc"), args)
}

fn germlab(args: &[&str]) -> Output {
    run(env!("CARGO_BIN_EXE_germlab"), args)
}

fn singcalc(args: &[&str]) -> Output {
    run(env!("CARGO_BIN_EXE_singcalc"), args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn cusp_coincidence_passes() {
    let out = tpcalc(&["verify", "cusp-coincidence", "--k", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("w3*w5 + w4^2"));
}

#[test]
fn json_reports_have_the_stable_keys() {
    let out = tpcalc(&["--json", "morin", "--r", "2", "--k", "3", "--integral"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for key in ["command", "params", "status", "witnesses", "artifacts"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["status"], "pass");
}

#[test]
fn bad_arguments_exit_with_two() {
    let out = tpcalc(&["morin", "--r", "0", "--k", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--r"));

    let out = tpcalc(&["morin", "--k", "3"]);
    assert_eq!(out.status.code(), Some(2));

    let out = germlab(&["sigma", "--point", "1,2,x,4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unsupported_cases_exit_with_two() {
    let out = tpcalc(&["verify", "twisted-coincidence", "--r", "4", "--k", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("UNSUPPORTED"));
}

#[test]
fn stratify_example_lists_the_singular_points() {
    let out = germlab(&["--json", "stratify", "--n", "4", "--k", "1", "--grid", "-1,0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let pts = v["artifacts"]["singular_points"].as_array().unwrap();
    assert_eq!(pts.len(), 3);
}

#[test]
fn sigma_at_a_singular_point() {
    let out = germlab(&["sigma", "--point", "-2,1,-3,1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("-2/3"));
}

#[test]
fn jacobian_finite_difference_check() {
    let out = germlab(&["jacobian", "--point", "1/2,-1,2,1/3", "--t", "1/5", "--check-fd"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn transversality_needs_corank_two() {
    let ok = germlab(&["transversality", "--point", "0,0,0,0", "--t", "0"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    let off = germlab(&["transversality", "--point", "0,0,0,0", "--t", "1"]);
    assert_eq!(off.status.code(), Some(2));
}

#[test]
fn scan_sigma2_writes_a_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.json");
    let out = germlab(&[
        "scan-sigma2",
        "--n",
        "4",
        "--k",
        "1",
        "--grid",
        "-1,0,1",
        "--report",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written["scan"]["points_scanned"], 243);
}

#[test]
fn injected_fault_is_detected() {
    let out = singcalc(&["suite", "--inject-fault", "flip-gtp"]);
    assert_eq!(out.status.code(), Some(1));
    let out = singcalc(&["suite", "--inject-fault", "no-such-fault"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn max_degree_comes_from_the_environment() {
    let with_env = Command::new(env!("CARGO_BIN_EXE_tpcalc"))
        .args(["--json", "gtp", "--r", "2", "--l", "1"])
        .env("SINGCALC_MAX_DEG", "9")
        .output()
        .unwrap();
    assert_eq!(json(&with_env)["params"]["max_deg"], 9);
    let flag_wins = Command::new(env!("CARGO_BIN_EXE_tpcalc"))
        .args(["--json", "gtp", "--r", "2", "--l", "1", "--max-deg", "7"])
        .env("SINGCALC_MAX_DEG", "9")
        .output()
        .unwrap();
    assert_eq!(json(&flag_wins)["params"]["max_deg"], 7);
    let bad = Command::new(env!("CARGO_BIN_EXE_tpcalc"))
        .args(["gtp", "--r", "2", "--l", "1"])
        .env("SINGCALC_MAX_DEG", "lots")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let a = tpcalc(&["--json", "verify", "morin-derivation", "--r", "2", "--k", "2"]);
    let b = tpcalc(&["--json", "verify", "morin-derivation", "--r", "2", "--k", "2"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn help_exits_cleanly() {
    let out = tpcalc(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("Usage: tpcalc [OPTIONS]"));
    let out = singcalc(&["germlab", "--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("Usage: singcalc germlab"));
}
