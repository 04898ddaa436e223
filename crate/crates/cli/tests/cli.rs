use std::path::PathBuf;
use std::process::{Command, Output};

use tau2_cli::VerificationReport;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tau2lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write_config(name: &str, text: &str) -> PathBuf {
    let path = scratch(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn tau2lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tau2lab")).args(args).output().unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn seeded_random_chain_verifies() {
    let cfg = write_config("random.json", r#"{"N":3,"L":2,"mode":"random","seed":42}"#);
    let report_path = scratch("random_report.json");
    let out = tau2lab(&[
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(String::from_utf8_lossy(&out.stdout).contains("overall: PASS"));
    let report: VerificationReport = serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert!(report.overall_pass);
    assert_eq!(report.model.r.as_ref().unwrap().len(), 2);

    let rerender = tau2lab(&["report", report_path.to_str().unwrap()]);
    assert_eq!(rerender.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&rerender.stdout).contains("PASS  commuting_family"));
}

#[test]
fn zero_b_exits_with_config_error() {
    let cfg = write_config(
        "zero_b.json",
        r#"{"N":2,"L":1,"mode":"explicit","couplings":{
            "a":[[0,0],[0,0]],"b":[[0,0],[1,0]],"c":[[0,0],[0,0]],"d":[[1,0],[1,0]]}}"#,
    );
    let out = tau2lab(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("couplings.b[0]"));
}

#[test]
fn missing_coupling_array_is_named() {
    let cfg = write_config(
        "missing_b.json",
        r#"{"N":2,"L":1,"mode":"explicit","couplings":{"a":[[0,0],[0,0]],"c":[[0,0],[0,0]],"d":[[1,0],[1,0]]}}"#,
    );
    let out = tau2lab(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("couplings.b"));
}

#[test]
fn oversize_chain_is_rejected() {
    let cfg = write_config("big.json", r#"{"N":4,"L":7,"mode":"random","seed":1}"#);
    let out = tau2lab(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("4096"));
}

#[test]
fn coincident_modes_fail_the_run() {
    let cfg = write_config(
        "degenerate.json",
        r#"{"N":2,"L":2,"mode":"clock","clock":{"alpha":[[1,0],[1,0]],"gamma":[[0,0]]}}"#,
    );
    let out = tau2lab(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("SKIP  projector_idempotency"));
    assert!(text.contains("PASS  commuting_family"));
}

#[test]
fn tolerance_override_and_selection() {
    let cfg = write_config("override.json", r#"{"N":2,"L":2,"mode":"random","seed":1}"#);
    let path = cfg.to_str().unwrap();
    let out = tau2lab(&["verify", "--config", path, "--checks", "eigenbasis_gram", "--tolerance", "eigenbasis_gram=1e6"]);
    assert_eq!(out.status.code(), Some(1));
    let out = tau2lab(&["verify", "--config", path, "--checks", "commuting_family,truncation"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 2);
    let out = tau2lab(&["verify", "--config", path, "--checks", "no_such_check"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn spectrum_and_eigenbasis_dumps() {
    let cfg = write_config(
        "clock1.json",
        r#"{"N":2,"L":1,"mode":"clock","clock":{"alpha":[[1,0]],"gamma":[]},"seed":1}"#,
    );
    let path = cfg.to_str().unwrap();
    let out = tau2lab(&["spectrum", "--config", path]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("r_1 = +1.000000000000e0"), "{text}");

    let out = tau2lab(&["eigenbasis", "--config", path]);
    assert_eq!(out.status.code(), Some(0));
    let dump: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let states = dump["states"].as_array().unwrap();
    assert_eq!(states.len(), 2);
    let ground = states[0]["amplitudes"].as_array().unwrap();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    assert!((ground[0][0].as_f64().unwrap() - s).abs() < 1e-12);
    assert!((ground[1][0].as_f64().unwrap() - s).abs() < 1e-12);
}
