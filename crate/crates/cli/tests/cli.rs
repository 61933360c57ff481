use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("weid-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn path3(k: u32, p: u32, q: u32) -> PathBuf {
    let json = format!(
        r#"{{"vertices":["a","b","x","y"],"edges":[{{"u":"a","v":"b","w":{k}}},{{"u":"a","v":"x","w":{p}}},{{"u":"b","v":"y","w":{q}}}]}}"#
    );
    scratch(&format!("path3-{k}-{p}-{q}.json"), &json)
}

fn weid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weid")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    })
}

#[test]
fn check_cm_runs_both_oracles() {
    let g = path3(1, 2, 2);
    let out = weid(&["check-cm", "--graph", g.to_str().unwrap(), "--power", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["is_cm"], true);
    assert_eq!(v["unmixed"], true);
    assert_eq!(v["agree"], true);
    assert_eq!(v["runs"].as_array().unwrap().len(), 2);
    assert!(v["elapsed_ms"].is_number());
}

#[test]
fn check_cm_reports_a_witness() {
    let g = path3(1, 2, 1);
    let out = weid(&["check-cm", "--graph", g.to_str().unwrap(), "--power", "2", "--method", "depth"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["is_cm"], false);
    assert_eq!(v["method"], "depth");
    assert!(v["witness"].is_object());
}

#[test]
fn exhausted_budget_exits_with_three() {
    let g = path3(1, 2, 2);
    let out = weid(&[
        "check-cm", "--graph", g.to_str().unwrap(), "--power", "3", "--method", "depth",
        "--budget-monomials", "3",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(json(&out)["is_cm"].is_null());
}

#[test]
fn decompose_ideal_file() {
    let ideal = scratch(
        "ideal.json",
        r#"{"variables":["x","y","z"],"generators":[{"x":2,"y":1},{"y":2,"z":1}]}"#,
    );
    let out = weid(&["decompose", "--ideal", ideal.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    // (x^2 y, y^2 z) = (y) ∩ (x^2, z) ∩ (x^2, y^2)
    let mut primes: Vec<Vec<String>> = v["components"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| serde_json::from_value(c["prime"].clone()).unwrap())
        .collect();
    primes.sort();
    assert_eq!(primes, vec![vec!["x", "y"], vec!["x", "z"], vec!["y"]]);
    assert_eq!(v["unmixed"], false);
    assert_eq!(v["height"], 1);
}

#[test]
fn symbolic_power_of_a_balanced_path() {
    let g = path3(1, 2, 2);
    let out = weid(&["symbolic", "--graph", g.to_str().unwrap(), "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["equals_power"], true);
}

#[test]
fn criteria_reports() {
    let g = path3(1, 2, 1);
    let out = weid(&["criteria", "--graph", g.to_str().unwrap(), "--theorem", "path3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["holds"], false);
    assert_eq!(v["violations"].as_array().unwrap().len(), 1);

    let star = scratch(
        "star.json",
        r#"{"vertices":["x1","x2","x3","y1","y2","y3"],"edges":[
            {"u":"x1","v":"x3","w":1},{"u":"x2","v":"x3","w":2},
            {"u":"x1","v":"y1","w":2},{"u":"x2","v":"y2","w":4},{"u":"x3","v":"y3","w":4}]}"#,
    );
    let out = weid(&["criteria", "--graph", star.to_str().unwrap(), "--theorem", "star"]);
    assert_eq!(json(&out)["holds"], true);
}

#[test]
fn criteria_requires_ell_for_power_criteria() {
    let g = path3(1, 2, 2);
    let out = weid(&["criteria", "--graph", g.to_str().unwrap(), "--theorem", "tk"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--ell"));
}

#[test]
fn sweep_writes_reproducible_reports() {
    let dir = std::env::temp_dir().join(format!("weid-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let run = |name: &str| {
        let path = dir.join(name);
        let out = weid(&[
            "sweep", "--family", "path3", "--max-weight", "2", "--max-power", "2", "--seed", "3",
            "--out", path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(json(&out)["summary"]["instances"], 8);
        fs::read(path).unwrap()
    };
    assert_eq!(run("a.json"), run("b.json"));
}

#[test]
fn search_and_table_output() {
    let out = weid(&[
        "--format", "table", "search", "--conjecture", "vwc-square", "--family", "path3",
        "--max-weight", "2", "--max-power", "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("hits          0"), "{text}");
}

#[test]
fn bad_family_is_rejected() {
    let out = weid(&["sweep", "--family", "cycles"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}
