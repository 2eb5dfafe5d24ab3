use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ribbon-koszul"));
    c.env_remove("RIBBON_KOSZUL_CACHE");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_cached(dir: &Path, args: &[&str]) -> Output {
    bin().arg("--cache-dir").arg(dir).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn digest(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

const SCHUR: &[&str] = &["schur", "--algebra", "builtin:sym", "--dim", "2", "--composition", "2,1"];

#[test]
fn schur_example() {
    let v = json(&run(SCHUR));
    assert_eq!(v["dim"], 2);
    assert_eq!(v["status"], "ok");
}

#[test]
fn koszul_check_example() {
    let v = json(&run(&["koszul-check", "--algebra", "builtin:sym", "--dim", "2", "--max-degree", "5", "--method", "both"]));
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["certified_through"], 5);
}

#[test]
fn filtration_example() {
    let v = json(&run(&["filtration", "--algebras", "builtin:sym,builtin:sym", "--dims", "2,2", "--compositions", "1|1;1|1"]));
    assert_eq!(v["sum"], 7);
    assert_eq!(v["balanced"], true);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let a = run(SCHUR);
    let b = run(SCHUR);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let args = ["--field", "prime:32003", "tor", "--algebra", "builtin:ext", "--dim", "2", "--max-i", "2"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn cache_hit_matches_cold_run() {
    let dir = tempfile::tempdir().unwrap();
    for args in [SCHUR, &["multischur", "--algebras", "builtin:sym,builtin:sym", "--dims", "2", "--compositions", "1|1;1|1"]]
    {
        let cold = run(args);
        let first = run_cached(dir.path(), args);
        let hit = run_cached(dir.path(), args);
        assert!(String::from_utf8_lossy(&hit.stderr).contains("cache hit"));
        assert_eq!(digest(&cold.stdout), digest(&first.stdout));
        assert_eq!(digest(&cold.stdout), digest(&hit.stdout));
    }
    let records: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(records.len(), 2);
    for r in records {
        assert_eq!(&std::fs::read(r).unwrap()[..5], b"RKSV1");
    }
}

#[test]
fn environment_overrides_cache_dir() {
    let flag_dir = tempfile::tempdir().unwrap();
    let env_dir = tempfile::tempdir().unwrap();
    let out = bin().env("RIBBON_KOSZUL_CACHE", env_dir.path()).arg("--cache-dir").arg(flag_dir.path()).args(SCHUR).output().unwrap();
    assert!(out.status.success());
    assert_eq!(std::fs::read_dir(env_dir.path()).unwrap().count(), 1);
    assert_eq!(std::fs::read_dir(flag_dir.path()).unwrap().count(), 0);
}

#[test]
fn damaged_cache_record_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let cold = run_cached(dir.path(), SCHUR);
    let record = std::fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
    let mut bytes = std::fs::read(&record).unwrap();
    bytes.truncate(bytes.len() - 3);
    std::fs::write(&record, bytes).unwrap();
    let again = run_cached(dir.path(), SCHUR);
    assert!(!String::from_utf8_lossy(&again.stderr).contains("cache hit"));
    assert_eq!(cold.stdout, again.stdout);
}

#[test]
fn fail_verdict_exits_zero() {
    let alg = fixture("generic34.json");
    let v = json(&run(&["koszul-check", "--algebra", &alg, "--max-degree", "4"]));
    assert_eq!(v["status"], "fail");
    assert_eq!(v["certified_through"], 3);
    assert_eq!(v["agree"], true);
}

#[test]
fn engine_errors_exit_nonzero() {
    let out = run(&["--degree-bound", "3", "schur", "--composition", "2,2"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"name\": \"q\",\n  \"field\": {\"kind\": \"rational\"},\n  \"generators\": [\"x\"\n}").unwrap();
    let out = run(&["schur", "--algebra", bad.to_str().unwrap(), "--composition", "1"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.json") && err.contains("line"), "{err}");
}

#[test]
fn module_flags_and_text_tables() {
    let v = json(&run(&["ses", "--algebra", "builtin:ext", "--dim", "3", "--left-module", "trunc:1", "--alpha", "1", "--beta", "1,1"]));
    assert_eq!(v["status"], "pass");
    let out = run(&["--format", "text", "ext", "--algebra", "builtin:sym", "--dim", "2", "--left-module", "trivial", "--max-i", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("ext over rational: status pass"), "{text}");
}

#[test]
fn symfunc_reports() {
    let v = json(&run(&["symfunc", "--character", "ribbon", "--composition", "2,1"]));
    assert_eq!(v["polynomial"], "x1^2*x2 + x1*x2^2");
    assert_eq!(v["status"], "pass");
    let v = json(&run(&["symfunc", "--character", "segre", "--alpha", "1,2", "--d", "2"]));
    assert_eq!(v["corrected_holds"], true);
    assert_eq!(v["literal_holds"], false);
}
