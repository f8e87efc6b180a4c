//! Exit-code contract and output layout of the `actiflow` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const EXAMPLE: &str = "\
# hyperbolic example
n = 2
N = 4
L = 2pi
lambda0 = 1
alpha = -1/4
beta = 1
gamma0 = -5
gamma2 = 4
equilibrium = ordered
";

const STABLE: &str = "\
n = 2
N = 4
L = 2pi
lambda0 = 1
alpha = 1
beta = 1
gamma0 = 1
gamma2 = 1
t_end = 0.2
";

fn run(dir: &Path, config: &str, args: &[&str]) -> Output {
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_actiflow"))
        .args(args)
        .arg("--config")
        .arg(&cfg)
        .arg("--outdir")
        .arg(dir.join("out"))
        .output()
        .unwrap()
}

fn meta(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("out/meta.json")).unwrap()).unwrap()
}

#[test]
fn classify_example_is_normally_hyperbolic() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), EXAMPLE, &["classify"]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<Value> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[1]["label"], "NormallyHyperbolic");
    assert_eq!(lines[1]["quadratic_form"], -1.0);
    assert_eq!(lines[1]["rule"], "hyperbolicity");
    let m = meta(dir.path());
    assert_eq!(m["config"], EXAMPLE);
    assert_eq!(m["files"][0]["path"], "verdicts.jsonl");
}

#[test]
fn simulate_from_zero_stays_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = format!("{STABLE}perturbation_h2 = 0\nsnapshot_every = 50\n");
    let out = run(dir.path(), &cfg, &["simulate"]);
    assert_eq!(out.status.code(), Some(0));
    let energy = std::fs::read_to_string(dir.path().join("out/energy.csv")).unwrap();
    let mut rows = energy.lines();
    assert_eq!(rows.next(), Some("t,l2sq,gradsq,lapsq,l4quart,residual"));
    let rows: Vec<&str> = rows.collect();
    assert_eq!(rows.len(), 201);
    for r in rows {
        let l2: f64 = r.split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(l2, 0.0);
    }
    let m = meta(dir.path());
    let files: Vec<&str> = m["files"].as_array().unwrap().iter().map(|f| f["path"].as_str().unwrap()).collect();
    assert_eq!(
        files,
        [
            "snapshot_000000.bin",
            "snapshot_000001.bin",
            "snapshot_000002.bin",
            "snapshot_000003.bin",
            "snapshot_000004.bin",
            "energy.csv",
            "result.json"
        ]
    );
    for f in m["files"].as_array().unwrap() {
        assert_eq!(f["sha256"].as_str().unwrap().len(), 64);
    }
}

#[test]
fn experiment_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(run(d, STABLE, &["experiment", "decay"]).status.code(), Some(0));
    assert_eq!(run(d, STABLE, &["experiment", "sweep"]).status.code(), Some(0));
    assert_eq!(run(d, STABLE, &["experiment", "growth"]).status.code(), Some(2));
    assert_eq!(run(d, STABLE, &["experiment", "normal-stability"]).status.code(), Some(2));
    assert_eq!(run(d, STABLE, &["experiment", "escape"]).status.code(), Some(2));
    assert_eq!(run(d, EXAMPLE, &["experiment", "decay"]).status.code(), Some(2));
    assert_eq!(run(d, EXAMPLE, &["experiment", "normal-stability"]).status.code(), Some(2));

    let unstable = STABLE.replace("alpha = 1", "alpha = 4").replace("gamma0 = 1", "gamma0 = -5");
    let growth = format!("{unstable}t_end = 3\n").replace("t_end = 0.2\n", "");
    assert_eq!(run(d, &growth, &["experiment", "growth"]).status.code(), Some(0));
    let result: Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("out/result.json")).unwrap()).unwrap();
    assert_eq!(result["pass"], true);
    // too short to collect a fit window: a scientific failure
    let short = unstable.replace("t_end = 0.2", "t_end = 0.02");
    assert_eq!(run(d, &short, &["experiment", "growth"]).status.code(), Some(1));

    let stable_polar = "n = 2\nN = 4\nL = 2pi\nlambda0 = 1\nalpha = -1\nbeta = 1\ngamma0 = 1\ngamma2 = 1\nequilibrium = ordered\nt_end = 4\nperturbation_h2 = 0.01\nsnapshot_every = 20\n";
    assert_eq!(run(d, stable_polar, &["experiment", "normal-stability"]).status.code(), Some(0));
    let escape = format!("{EXAMPLE}t_end = 15\nseeds = 2\nrho = 0.05\n");
    let out = run(d, &escape, &["experiment", "escape", "--serial"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(d.join("out/escape.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert_eq!(meta(d)["threads"], 1);
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = run(d, &STABLE.replace("gamma2 = 1", "gamma2 = -1"), &["classify"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("Γ₂, β > 0"));
    let out = run(d, &format!("{STABLE}gamma3 = 1\n"), &["classify"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("gamma3"));
    let missing = Command::new(env!("CARGO_BIN_EXE_actiflow"))
        .args(["classify", "--config", "/nonexistent/run.cfg"])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));
    let usage = Command::new(env!("CARGO_BIN_EXE_actiflow")).args(["experiment", "frobnicate"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn serial_reruns_are_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg = format!("{STABLE}seed = 3\nperturbation_h2 = 0.1\n");
    for d in [a.path(), b.path()] {
        assert_eq!(run(d, &cfg, &["simulate", "--serial"]).status.code(), Some(0));
    }
    let (ma, mb) = (meta(a.path()), meta(b.path()));
    assert_eq!(ma["record_hash"], mb["record_hash"]);
    assert_eq!(ma["files"], mb["files"]);
    assert_eq!(run(b.path(), &cfg, &["simulate", "--serial", "--seed", "4"]).status.code(), Some(0));
    let mc = meta(b.path());
    assert_eq!(mc["seed"], 4);
    assert_ne!(ma["record_hash"], mc["record_hash"]);
}
