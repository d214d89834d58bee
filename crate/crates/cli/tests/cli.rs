use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bertrand(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bertrand")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = bertrand(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn stdout(args: &[&str]) -> String {
    let out = bertrand(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bertrand-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn near(v: &Value, want: f64) -> bool {
    (v.as_f64().unwrap() - want).abs() < 1e-12
}

#[test]
fn equilibrium_examples() {
    let v = json(&["equilibrium", "--alpha", "1/2", "--c1", "1/3", "--c2", "1/3"]);
    assert!(near(&v["p1"], 1.0) && near(&v["p2"], 1.0));
    assert_eq!(v["admissible_roots"], 1);
    let out = bertrand(&["equilibrium", "--alpha", "1/3", "--c1", "0.2", "--c2", "0.2"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning: --c1 0.2 is not exact"));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(near(&v["p1"], 1.0) && near(&v["p2"], 1.0));
    let v = json(&["equilibrium", "--alpha", "1/2", "--c1", "1", "--c2", "1/4"]);
    assert_eq!(v["certified_unique"], true);
    // x³ - 4x² + 7x/2 + 3/4 changes sign on (1, 2) and (2, 3); one root survives the filter.
    assert_eq!(v["positive_roots"], 2);
    assert_eq!(v["admissible_roots"], 1);
}

#[test]
fn stability_examples() {
    let v = json(&["stability", "--alpha", "1/2", "--c1", "1", "--c2", "1/4", "--k", "1"]);
    assert_eq!(v["stable"], true);
    assert_eq!(v["classification"]["rule"], "half_r1_r2");
    let v = json(&["stability", "--alpha", "1/3", "--c1", "1", "--c2", "1/4", "--k", "34"]);
    assert_eq!(v["stable"], false);
    assert_eq!(v["classification"]["signs"]["R3"], -1);
    let v = json(&["stability", "--alpha", "1/2", "--c", "1/5", "--k1", "1", "--k2", "1"]);
    assert_eq!(v["stable"], true);
    assert!(near(&v["threshold_c_squared"], 5.0 / 216.0));
    let v = json(&["stability", "--alpha", "1/2", "--c", "1/10", "--k", "1"]);
    assert_eq!(v["stable"], false);
    let v = json(&["stability", "--alpha", "0.7", "--c1", "1/2", "--c2", "1/3", "--k", "1/10"]);
    assert!(v.get("classification").is_none());
    assert_eq!(v["verdict"], "stable");
}

#[test]
fn statics_example() {
    let v = json(&["statics", "--alpha", "1/2", "--c", "1"]);
    assert!(near(&v["statics"]["price"], 3.0));
    assert!(near(&v["statics"]["consumer_surplus_each"], 2.0 * std::f64::consts::LN_2));
    assert_eq!(v["exact"]["profit"], "1/3");
}

#[test]
fn verify_exit_codes() {
    let v = json(&["verify", "--tables"]);
    assert_eq!(v["ok"], true);
    assert_eq!(v["tables"][0]["rows"], 32);
    assert_eq!(v["tables"][1]["rows"], 40);
    let v = json(&["verify", "--identities", "--alpha", "1/2", "--trials", "3"]);
    assert_eq!(v["ok"], true);
    let out = bertrand(&["verify", "--identities", "--alpha", "1/3", "--trials", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["ok"], false);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["stability", "--alpha", "2", "--c", "1"][..],
        &["stability", "--alpha", "1/2"],
        &["equilibrium", "--c", "-1"],
        &["equilibrium", "--c", "1/0"],
        &["nonsense"],
        &["scan", "--alpha", "0.7", "--x", "c1", "--x-from", "1", "--x-to", "2", "--y", "c2", "--y-from", "1", "--y-to", "2"],
        &["bifurcation-2d", "--c", "1", "--x", "k1", "--x-from", "1", "--x-to", "2", "--y", "k1", "--y-from", "1", "--y-to", "2", "--x0", "1", "--y0", "1"],
    ] {
        assert_eq!(bertrand(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn scan_csv_is_exact_and_deterministic() {
    let args = [
        "scan", "--alpha", "1/2", "--c2", "1/3", "--x", "c1", "--x-from", "1/10", "--x-to", "1/2", "--nx", "3", "--y", "k",
        "--y-from", "1/2", "--y-to", "3", "--ny", "2",
    ];
    let a = stdout(&args);
    assert!(a.starts_with("x,y,stable,cd1,cd2,cd3,R1,R2\n"));
    assert_eq!(a.lines().count(), 7);
    assert!(a.contains("3/10,1/2,"));
    let path = scratch("scan.csv");
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap(), "--jobs", "1"]);
    assert!(bertrand(&with_out).status.success());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), a);
}

#[test]
fn bifurcation_outputs() {
    let one = stdout(&[
        "bifurcation-1d", "--vary", "alpha", "--from", "0.3", "--to", "0.6", "--n", "4", "--k", "1", "--c", "0.2", "--x0",
        "0.56", "--y0", "1.06", "--classes",
    ]);
    let rows: Vec<&str> = one.lines().collect();
    assert_eq!(rows[0], "param,class_code");
    assert_eq!(rows.len(), 5);
    assert!(rows[1].ends_with(",1"));
    assert!(rows[4].ends_with(",26"));
    let samples = stdout(&[
        "bifurcation-1d", "--vary", "alpha", "--from", "0.56", "--to", "0.56", "--n", "1", "--c", "0.2", "--x0", "0.56",
        "--y0", "1.06",
    ]);
    assert_eq!(samples.lines().count(), 201);
    let args = [
        "bifurcation-2d", "--c1", "0.3", "--c2", "0.4", "--x", "k1", "--x-from", "0.5", "--x-to", "10", "--nx", "4", "--y",
        "k2", "--y-from", "0.5", "--y-to", "10", "--ny", "3", "--x0", "0.5", "--y0", "0.8",
    ];
    let a = stdout(&args);
    assert!(a.starts_with("x,y,class_code\n0.5,0.5,1\n"));
    assert_eq!(a.lines().count(), 13);
    let mut serial = args.to_vec();
    serial.extend(["--jobs", "1"]);
    assert_eq!(stdout(&serial), a);
}

#[test]
fn continuation_summary() {
    let path = scratch("cycles.csv");
    let v = json(&["continuation", "--c", "0.2", "--k", "1", "--csv", path.to_str().unwrap()]);
    assert!((v["branch_alpha"].as_f64().unwrap() - 0.553372).abs() < 1e-3);
    assert!((v["ns_alpha"].as_f64().unwrap() - 0.577570).abs() < 1e-3);
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("alpha,p1_a,p2_a,p1_b,p2_b,stable\n"));
}

#[test]
fn config_file_mirrors_flags() {
    let path = scratch("run.toml");
    std::fs::write(&path, "command = \"stability\"\nalpha = \"1/3\"\n[stability]\nc1 = \"1\"\nc2 = \"1/4\"\nk = 34\n").unwrap();
    let v = json(&["--config", path.to_str().unwrap()]);
    assert_eq!(v["stable"], false);
    // Flags given on the command line override the file.
    let v = json(&["stability", "--config", path.to_str().unwrap(), "--k", "1"]);
    assert_eq!(v["stable"], true);
    assert_eq!(bertrand(&["--config", "/nonexistent/run.toml"]).status.code(), Some(2));
}

#[test]
fn help_lists_every_command() {
    let h = stdout(&["--help"]);
    for c in ["equilibrium", "stability", "scan", "bifurcation-1d", "bifurcation-2d", "continuation", "statics", "verify"] {
        assert!(h.contains(c), "{c}");
    }
    assert!(stdout(&["scan", "--help"]).contains("[default: 50]"));
}
