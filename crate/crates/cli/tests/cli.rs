use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const DIRAC_1X2: &str = r#"{"mu":1,"dim":3,"coeffs":[
  [[[0,0],[0,0],[1,0]],[[0,0],[0,0],[0,0]],[[1,0],[0,0],[0,0]]],
  [[[1,0],[0,0],[0,0]],[[0,0],[1,0],[0,0]],[[0,0],[0,0],[-1,0]]]]}"#;
const SQUARE_MINUS_ONE: &str = r#"{"mu":2,"dim":1,"coeffs":[[[[-1,0]]],[[[0,0]]],[[[1,0]]]]}"#;
const IDENTITY_SYMBOL: &str = r#"{"mu":1,"dim":1,"coeffs":[[[[0,0]]],[[[1,0]]]]}"#;
const FREE_CONE: &str = r#"{"mu":1,"dim":2,"coeffs":[
  [[[0,0],[0,0]],[[0,0],[0,0]]],
  [[[1,0],[0,0]],[[0,0],[-1,0]]]]}"#;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_indicial"))
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str], input: &Path) -> (Output, Value) {
    let out = bin().args(args).arg(input).output().unwrap();
    let value = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out, value)
}

#[test]
fn verify_dirac_fixture_passes() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "dirac.json", DIRAC_1X2);
    let (out, v) = run(&["verify"], &input);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!((v["sig"].as_i64(), v["sf"].as_i64(), v["pass"].as_bool()), (Some(1), Some(1), Some(true)));
    assert!(v["crossings"].is_array() && v["gram"].is_array());
}

#[test]
fn sf_reports_crossings_and_agreement() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "sq.json", SQUARE_MINUS_ONE);
    let (out, v) = run(&["sf"], &input);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(v["value"].as_i64(), Some(0));
    assert_eq!(v["agree"].as_bool(), Some(true));
    let crossings = v["report"]["crossings"].as_array().unwrap();
    let at: Vec<f64> = crossings.iter().map(|c| c["sigma_c"].as_f64().unwrap()).collect();
    assert_eq!(at.len(), 2);
    assert!((at[0] + 1.0).abs() < 1e-10 && (at[1] - 1.0).abs() < 1e-10);
    let signs: Vec<i64> = crossings.iter().map(|c| c["crossing_signature"].as_i64().unwrap()).collect();
    assert_eq!(signs, vec![-1, 1]);
}

#[test]
fn malformed_input_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "bad.json", "{\"mu\": 1, \"coeffs\": [");
    let (out, _) = run(&["roots"], &input);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    let (out, _) = run(&["roots"], &dir.path().join("missing.json"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn non_hermitian_input_is_rejected() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "nh.json", r#"{"mu":1,"dim":1,"coeffs":[[[[0,0.3]]],[[[1,0]]]]}"#);
    let (out, _) = run(&["sf"], &input);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn curves_csv() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "id.json", IDENTITY_SYMBOL);
    let csv = dir.path().join("curves.csv");
    let out = bin()
        .args(["sf", "--csv", csv.to_str().unwrap(), "--samples", "3", "--window", "1"])
        .arg(&input)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(text.lines().next(), Some("sigma,lambda_1"));
    assert_eq!(rows, vec![vec![-1.0, -1.0], vec![0.0, 0.0], vec![1.0, 1.0]]);

    let input = write(&dir, "dirac.json", DIRAC_1X2);
    let out = bin().args(["sf", "--csv", csv.to_str().unwrap(), "--samples", "5"]).arg(&input).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.lines().all(|l| l.split(',').count() == 4));

    let out = bin().args(["sf", "--csv", "/nonexistent/dir/c.csv"]).arg(&input).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["sf", "--csv", csv.to_str().unwrap(), "--samples", "1"]).arg(&input).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn roots_ebasis_and_gram() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "id.json", IDENTITY_SYMBOL);
    let json_out = dir.path().join("roots.json");
    let out = bin().args(["roots", "--json", json_out.to_str().unwrap()]).arg(&input).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&json_out).unwrap()).unwrap();
    assert_eq!(v[0]["alg_mult"].as_u64(), Some(1));

    let (out, v) = run(&["ebasis"], &input);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(v[0]["dim"].as_u64(), Some(1));

    let (out, v) = run(&["gram"], &input);
    assert_eq!(out.status.code(), Some(0));
    let entry = &v["matrix"][0][0];
    assert!((entry[0].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert_eq!(v["sig"].as_i64(), Some(1));
}

#[test]
fn cone_subcommand() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "cone.json", FREE_CONE);
    let (out, v) = run(&["cone"], &input);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(v["deficiency"]["n_plus"].as_u64(), Some(1));
    assert_eq!(v["deficiency"]["n_minus"].as_u64(), Some(1));
    assert_eq!(v["verdict"]["verdict"].as_str(), Some("PASS"));

    let obstructed = write(&dir, "obstructed.json", IDENTITY_SYMBOL);
    let (out, _) = run(&["cone"], &obstructed);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn zoo_writes_fixtures_that_verify() {
    let dir = TempDir::new().unwrap();
    let out = bin().args(["zoo", "--out"]).arg(dir.path()).args(["--count", "3", "--seed", "5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let files: Vec<PathBuf> = serde_json::from_slice::<Vec<String>>(&out.stdout).unwrap().into_iter().map(PathBuf::from).collect();
    assert_eq!(files.len(), 11);
    for f in &files {
        let meta: Value = serde_json::from_str(&std::fs::read_to_string(f).unwrap()).unwrap();
        assert!(meta["expected_sf"].is_i64() && meta.get("seed").is_some());
        let (out, v) = run(&["sf"], f);
        assert_eq!(out.status.code(), Some(0), "{}", f.display());
        assert_eq!(v["value"], meta["expected_sf"], "{}", f.display());
        let (out, v) = run(&["verify"], f);
        assert_eq!(out.status.code(), Some(0), "{}", f.display());
        assert_eq!(v["pass"].as_bool(), Some(true));
    }
}
