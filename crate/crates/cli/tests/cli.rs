use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperci")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn enumerate_counts() {
    for (shape, t, want) in [("2,2,2,2", "2", 31), ("2,2", "1", 1), ("2,2,4", "3", 29)] {
        let out = run(&["--shape", shape, "-t", t, "enumerate"]);
        assert_eq!(out.status.code(), Some(0));
        let v = json(&out);
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["config"]["command"], "enumerate");
        assert_eq!(v["result"]["minimal_prime_count"], want);
        assert_eq!(v["result"]["sets"].as_array().unwrap().len(), want as usize);
    }
}

#[test]
fn csv_schema_is_stable() {
    let out = run(&["--shape", "2,2,2,2", "-t", "2", "enumerate", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "shape,t,minimal_primes,radical_verdict,witness_degree,runtime_ms");
    assert_eq!(lines[1], "2x2x2x2,2,31,,,");
    let out = run(&["--shape", "2,2,4", "-t", "2", "verify", "radical", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().nth(1).unwrap(), "2x2x4,2,29,non-radical-witnessed,4,");
}

#[test]
fn verify_examples() {
    let out = run(&["--shape", "2,2,2", "-t", "3", "verify", "quotient"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["passed"], true);
    assert_eq!(v["result"]["minimal_prime_count"], 5);

    let out = run(&["--shape", "2,2,2", "-t", "1", "verify", "gb", "--order", "lex-diag"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["checks"][0]["name"], "explicit-basis[lex-diag]");

    let out = run(&["--shape", "2,2,4", "-t", "2", "verify", "radical", "--degree-bound", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["radical_verdict"], "non-radical-witnessed");
    assert!(v["result"]["witness"]["polynomial"].as_str().unwrap().contains("x_("));

    let out = run(&["--shape", "2,2,2", "-t", "1", "verify", "radical"]);
    assert_eq!(json(&out)["result"]["radical_verdict"], "radical-verified");

    for check in ["saturation", "identities"] {
        let out = run(&["--shape", "2,2,2", "-t", "2", "verify", check]);
        assert_eq!(out.status.code(), Some(0), "{check}");
    }
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["enumerate"]).status.code(), Some(1));
    assert_eq!(run(&["--shape", "2,2", "-t", "5", "enumerate"]).status.code(), Some(1));
    assert_eq!(run(&["--shape", "2,2", "frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--shape", "2,2,2", "verify", "gb", "--order", "spiral"]).status.code(), Some(1));
    assert_eq!(run(&["--shape", "2,2,2", "-t", "2", "verify", "quotient"]).status.code(), Some(1));
    assert_eq!(run(&["--shape", "2,2,2", "verify", "gb", "--order", "lex-diag:1,1,2"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn budget_exhaustion_exits_two() {
    let out = run(&["--shape", "2,2,2,2", "-t", "1", "enumerate", "--cell-budget", "8"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--cell-budget"));
    let out = Command::new(env!("CARGO_BIN_EXE_hyperci"))
        .args(["--shape", "2,2,2,2", "-t", "1", "enumerate"])
        .env("HYPERCI_CELL_BUDGET", "8")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["--shape", "2,2,2", "-t", "3", "verify", "saturation", "--pair-budget", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_ideal_file_reports_position() {
    let path = scratch("broken.json");
    std::fs::write(&path, "{\"vars\": [[1]],\n  \"gens\": [[{\"c\": 1,}]]}").unwrap();
    let out = run(&["gb", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2") && err.contains("column"), "{err}");
}

#[test]
fn gb_is_idempotent() {
    let input = scratch("kahle.json");
    std::fs::write(&input, hyperci::decomp::kahle_example_file().to_json()).unwrap();
    let first = scratch("kahle_gb.json");
    let out = run(&["gb", input.to_str().unwrap(), "--output", first.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let once = std::fs::read_to_string(&first).unwrap();
    let out = run(&["gb", first.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), once);
    let file = hyperci::polyengine::IdealFile::parse(&once).unwrap();
    assert!(file.gens.len() >= 4);

    let out = run(&["gb", input.to_str().unwrap(), "--order", "lex"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["gb", input.to_str().unwrap(), "--format", "text"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("x_(9)"));
}

#[test]
fn reruns_are_byte_identical() {
    let args = ["--shape", "2,2,2,2", "-t", "3", "report", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["config"]["seed"], 7);
    let r = &v["result"]["reports"][0];
    assert_eq!(r["minimal_prime_count"], 17);
    assert_eq!(r["radical_verdict"], "non-radical-witnessed");
    assert!(r.get("runtime_ms").is_none());
}

#[test]
fn timings_are_opt_in() {
    let out = run(&["--shape", "2,2,2", "-t", "1", "enumerate", "--timings"]);
    assert!(json(&out)["result"]["runtime_ms"].is_u64());
}
