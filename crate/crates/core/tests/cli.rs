use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn twodesign(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twodesign")).args(args).output().expect("binary runs")
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> (i32, Vec<u8>) {
    let path = dir.join(name);
    let mut full = args.to_vec();
    let p = path.to_str().unwrap();
    full.extend(["--out", p]);
    let out = twodesign(&full);
    (out.status.code().unwrap(), std::fs::read(&path).unwrap_or_default())
}

fn csv_config(bytes: &[u8]) -> Value {
    let text = std::str::from_utf8(bytes).unwrap();
    let line = text.lines().next().unwrap();
    serde_json::from_str(line.strip_prefix("# config: ").unwrap()).unwrap()
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 4] = [
        &["error-curve", "--family", "pbfe", "--n", "8", "--steps", "0:6", "--realizations", "20", "--seed", "5"],
        &["sweep", "--family", "brickwork", "--n", "6", "--steps", "1:4", "--format", "json"],
        &["connections", "--family", "bridge", "--n", "8", "--layers", "10:30", "--realizations", "40", "--seed", "2"],
        &["depth", "--family", "pcg", "--n", "8", "--realizations", "16", "--seed", "9", "--threads", "1"],
    ];
    for args in cases {
        let (c1, a) = run_to(dir.path(), "a", args);
        let (c2, b) = run_to(dir.path(), "b", args);
        assert_eq!((c1, c2), (0, 0), "{args:?}");
        assert!(!a.is_empty());
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn outputs_embed_config_and_seed() {
    let dir = tempfile::tempdir().unwrap();
    let (code, bytes) = run_to(dir.path(), "c.csv", &["error-curve", "--family", "pcg", "--n", "6", "--steps", "0:3", "--seed", "77"]);
    assert_eq!(code, 0);
    let cfg = csv_config(&bytes);
    assert_eq!(cfg["seed"], 77);
    assert_eq!(cfg["family"], "pcg");
    assert_eq!(cfg["command"], "error-curve");

    let (code, bytes) = run_to(dir.path(), "d.json", &["depth", "--family", "linear", "--n", "5", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(v["config"]["seed"], 0);
    assert_eq!(v["config"]["format"], "json");
    assert!(v["rows"][0]["depth"].as_f64().unwrap() > 0.0);
}

#[test]
fn seed_changes_sampled_results() {
    let dir = tempfile::tempdir().unwrap();
    let args = |seed: &'static str| -> Vec<&'static str> {
        vec!["error-curve", "--family", "pcg", "--n", "8", "--steps", "3", "--realizations", "8", "--seed", seed]
    };
    let (_, a) = run_to(dir.path(), "a", &args("1"));
    let (_, b) = run_to(dir.path(), "b", &args("2"));
    let body = |x: &[u8]| String::from_utf8(x.to_vec()).unwrap().lines().skip(1).collect::<Vec<_>>().join("\n");
    assert_ne!(body(&a), body(&b));
}

#[test]
fn connections_columns() {
    let out = twodesign(&["connections", "--family", "linear", "--n", "6", "--layers", "5:7", "--realizations", "10"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().nth(1).unwrap(), "n,s,naive_mean,greedy_mean,naive_se,greedy_se");
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn formula_emits_value_inputs_variant() {
    let out = twodesign(&["formula", "--name", "depth", "--n", "12", "--eps", "0.01", "--variant", "collision"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["value"].as_f64().unwrap() > 0.0);
    assert_eq!(v["inputs"]["n"], 12);
    assert_eq!(v["variant"], "collision");

    let out = twodesign(&["formula", "--name", "disconnection", "--n", "12", "--variant", "bridge"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["value"].as_f64().unwrap() - 30.0 * 100f64.ln()).abs() < 1e-9);
}

#[test]
fn graph_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    std::fs::write(&g, r#"{"n": 4, "edges": [[0,1],[1,2],[2,3],[3,0]]}"#).unwrap();
    let from_file = twodesign(&["depth", "--graph", g.to_str().unwrap()]);
    let circle = twodesign(&["depth", "--family", "circle", "--n", "4"]);
    assert!(from_file.status.success() && circle.status.success());
    let row = |o: &Output| String::from_utf8(o.stdout.clone()).unwrap().lines().nth(2).unwrap().to_string();
    assert_eq!(row(&from_file), row(&circle));
    let cfg = csv_config(&from_file.stdout);
    assert_eq!(cfg["graph"]["n"], 4);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| twodesign(args).status.code().unwrap();
    assert_eq!(code(&["depth", "--family", "nonsense", "--n", "4"]), 2);
    assert_eq!(code(&["depth", "--family", "linear", "--n", "4", "--eps", "1.5"]), 2);
    assert_eq!(code(&["depth", "--family", "brickwork_pbc", "--n", "5"]), 2);
    assert_eq!(code(&["oracle-check", "--family", "linear", "--n", "4", "--steps", "1"]), 2);
    assert_eq!(code(&["error-curve", "--family", "linear", "--n", "4", "--steps", "3", "--threads", "0"]), 2);
    assert_eq!(code(&["depth", "--family", "linear", "--n", "6", "--max-steps", "3"]), 3);
    assert_eq!(code(&["oracle-check", "--family", "complete", "--n", "3", "--steps", "1:2"]), 0);
    assert_eq!(code(&["bounds", "--n", "8:10"]), 0);
}

#[test]
fn unreached_depth_still_writes_rows() {
    let dir = tempfile::tempdir().unwrap();
    let (code, bytes) = run_to(dir.path(), "u.csv", &["depth", "--family", "linear", "--n", "4:6", "--max-steps", "12"]);
    assert_eq!(code, 3);
    let text = String::from_utf8(bytes).unwrap();
    assert_eq!(text.lines().count(), 5);
}
