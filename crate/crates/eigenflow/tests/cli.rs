use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn eigenflow(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eigenflow"))
        .args(args)
        .current_dir(dir)
        .env_remove("EIGENFLOW_SEED")
        .output()
        .expect("binary runs")
}

fn without_timing(path: &Path) -> Value {
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    v.as_object_mut().unwrap().remove("timing");
    v
}

#[test]
fn generate_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.json", "b.json"] {
        let out = eigenflow(&["generate", "circle", "--n", "60", "--seed", "4", "--out", name], dir.path());
        assert!(out.status.success());
    }
    let a = std::fs::read(dir.path().join("a.json")).unwrap();
    let b = std::fs::read(dir.path().join("b.json")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn analyze_is_deterministic_and_plots() {
    let dir = tempfile::tempdir().unwrap();
    let out = eigenflow(&["generate", "circle", "--n", "80", "--seed", "2", "--out", "s.json"], dir.path());
    assert!(out.status.success());
    for name in ["r1.json", "r2.json"] {
        let out = eigenflow(&["analyze", "s.json", "--out", name], dir.path());
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let r1 = without_timing(&dir.path().join("r1.json"));
    assert_eq!(r1, without_timing(&dir.path().join("r2.json")));
    assert_eq!(r1["schema"], 1);
    let sig = r1["significant"].as_array().unwrap();
    assert_eq!(sig.len(), 1);
    assert_eq!(sig[0]["t"], 2);

    let out = eigenflow(&["plot", "r1.json", "--out", "p.svg"], dir.path());
    assert!(out.status.success());
    let svg = std::fs::read_to_string(dir.path().join("p.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("t = 2"));
}

#[test]
fn explicit_eigenvalue_list() {
    let dir = tempfile::tempdir().unwrap();
    eigenflow(&["generate", "circle", "--n", "50", "--seed", "1", "--out", "s.json"], dir.path());
    let out = eigenflow(&["analyze", "s.json", "--sweep", "list", "--eigenvalues", "2,-1"], dir.path());
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["eigenvalues"], serde_json::json!([2, 1008]));
    assert_eq!(v["diagrams"].as_array().unwrap().len(), 2);
}

#[test]
fn csv_input_needs_rho() {
    let dir = tempfile::tempdir().unwrap();
    let csv = "x,y,image\n0,0,1\n1,0,3\n0,1,0\n1,1,2\n0.4,0.6,4\n";
    std::fs::write(dir.path().join("s.csv"), csv).unwrap();
    let out = eigenflow(&["analyze", "s.csv"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = eigenflow(&["analyze", "s.csv", "--rho", "0.5"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(eigenflow(&["analyze", "missing.json"], dir.path()).status.code(), Some(2));
    std::fs::write(dir.path().join("bad.json"), "{\"points\": 3}").unwrap();
    assert_eq!(eigenflow(&["analyze", "bad.json"], dir.path()).status.code(), Some(2));
    eigenflow(&["generate", "circle", "--n", "30", "--out", "s.json"], dir.path());
    let out = eigenflow(&["analyze", "s.json", "--theta", "1.5"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = eigenflow(&["analyze", "s.json", "--prime", "12"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(eigenflow(&["frobnicate"], dir.path()).status.code(), Some(2));
    let out = eigenflow(&["oracle", "all", "--trials", "20", "--seed", "3"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn seed_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_eigenflow"))
            .args(["generate", "circle", "--n", "20"])
            .env("EIGENFLOW_SEED", seed)
            .current_dir(dir.path())
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("9"), run("9"));
    assert_ne!(run("9"), run("10"));
}
