use std::fs;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn unisym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unisym"))
        .args(args)
        .env_remove("UNISYM_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// Matrix JSON for `psi_{2n}`.
fn psi_json(n: usize) -> String {
    let q = 2 * n;
    let rows: Vec<Vec<i64>> = (0..q)
        .map(|i| {
            (0..q)
                .map(|j| match (i % 2, j) {
                    (0, j) if j == i + 1 => 1,
                    (1, j) if j + 1 == i => -1,
                    _ => 0,
                })
                .collect()
        })
        .collect();
    serde_json::json!({"field": "q", "rows": q, "cols": q, "skew": true, "entries": rows}).to_string()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn verify_appendix_passes() {
    let o = unisym(&["verify", "appendix", "--trials", "5", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["field"], "q");
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 4);
    for r in reports {
        assert_eq!(r["failures"].as_array().unwrap().len(), 0);
        assert!(r["elapsed_ms"].is_u64());
    }
}

#[test]
fn verify_is_reproducible_and_writes_file() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("r.json");
    let out = out.to_str().unwrap();
    let o = unisym(&["verify", "sm", "--seed", "3", "--output", out]);
    assert_eq!(o.status.code(), Some(0));
    let first: Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    let o = unisym(&["verify", "sm", "--seed", "3", "--output", out]);
    assert_eq!(o.status.code(), Some(0));
    let second: Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(first["reports"][0]["assertions"], second["reports"][0]["assertions"]);
}

#[test]
fn finite_field_refused_for_units() {
    let o = unisym(&["verify", "units", "--field", "fp:7"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("infinite field"));
}

#[test]
fn finite_field_accepted_for_pfaffian() {
    let o = unisym(&["verify", "pfaffian", "--field", "fp:101", "--trials", "10"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(unisym(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(unisym(&["verify", "sm", "--field", "fp:8"]).status.code(), Some(2));
    assert_eq!(unisym(&["verify", "sm", "--seed", "abc"]).status.code(), Some(2));
    assert_eq!(unisym(&["compute", "pf", "--input", "/nonexistent/x.json"]).status.code(), Some(2));
    assert_eq!(unisym(&["bench", "pfaffian", "--max-n", "0"]).status.code(), Some(2));
}

#[test]
fn seed_random_runs() {
    let o = unisym(&["verify", "sm", "--seed", "random"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn compute_pf_of_psi() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "psi8.json", &psi_json(4));
    let o = unisym(&["compute", "pf", "--input", &path]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1");
}

#[test]
fn compute_gamma_and_section() {
    let dir = TempDir::new().unwrap();
    // all upper entries 1 except a34 = 2: every even principal minor is nonzero
    let m = r#"{"field":"q","rows":4,"cols":4,"skew":true,
        "entries":[[0,1,1,1],[-1,0,1,1],[-1,-1,0,2],[-1,-1,-2,0]]}"#;
    let path = write(&dir, "a.json", m);
    let o = unisym(&["compute", "gamma", "--input", &path]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let g: Value = serde_json::from_str(&stdout(&o)).unwrap();
    // four triples, each leaving the single 1×1 generator; coefficients collect
    assert!(g.as_array().unwrap().len() <= 1);

    let o = unisym(&["compute", "section", "--input", &path, "--dim", "6"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dim"], 6);
    assert_eq!(v["vectors"].as_array().unwrap().len(), 4);
}

#[test]
fn compute_gamma_rejects_degenerate_input() {
    let dir = TempDir::new().unwrap();
    let m = r#"{"field":"q","rows":4,"cols":4,"skew":true,
        "entries":[[0,1,1,1],[-1,0,1,1],[-1,-1,0,0],[-1,-1,0,0]]}"#;
    let path = write(&dir, "a.json", m);
    let o = unisym(&["compute", "gamma", "--input", &path]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_small() {
    let o = unisym(&["bench", "pfaffian", "--max-n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("crossover"));
    assert_eq!(out.lines().filter(|l| l.ends_with("yes")).count(), 4);
    let o = unisym(&["bench", "pfaffian", "--max-n", "2", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
}
