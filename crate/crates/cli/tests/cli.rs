use std::fs;
use std::path::Path;
use std::process::Command;

use prime_avoid::document::{CertificateDocument, Mode};
use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_prime-avoid");

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(BIN);
    cmd.args(args).env_remove("PRIME_AVOID_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

const MICRO: &[&str] =
    &["construct", "--mode", "squarefree", "--x", "40", "--profile", "explicit", "--z", "6.3246", "--y", "10"];

fn micro_to(path: &Path) -> CertificateDocument {
    let mut args = MICRO.to_vec();
    let p = path.to_str().unwrap();
    args.extend(["--out", p]);
    assert_eq!(run(&args).code, 0);
    CertificateDocument::from_json(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn construct_writes_certificate_to_stdout() {
    let r = run(MICRO);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let doc = CertificateDocument::from_json(&r.stdout).unwrap();
    assert_eq!(doc.mode, Mode::Squarefree);
    assert_eq!(doc.modulus, "223092870");
    assert_eq!(doc.cover.len(), 21);
}

#[test]
fn construct_is_deterministic() {
    let a = run(MICRO);
    let b = run(MICRO);
    assert_eq!(a.stdout, b.stdout);
    let args = ["construct", "--mode", "kpower", "--x", "200", "--k", "1", "--profile", "explicit", "--z", "14.2", "--seed", "9"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn construct_exit_codes() {
    let r = run(&["construct", "--mode", "kpower", "--x", "40", "--k", "2", "--profile", "practical"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("(40k)^2"), "{}", r.stderr);
    assert_eq!(run(&["construct", "--mode", "squarefree", "--x", "40", "--y", "2"]).code, 64);
    assert_eq!(run(&["construct", "--mode", "squarefree", "--x", "40", "--z", "5"]).code, 64);
    assert_eq!(run(&["construct", "--mode", "squarefree", "--x", "40", "--k", "2"]).code, 64);
    assert_eq!(run(&["construct", "--mode", "cube", "--x", "40"]).code, 64);
    assert_eq!(run(&["construct", "--mode", "squarefree"]).code, 64);
    assert_eq!(run(&["construct", "--mode", "squarefree", "--x", "8"]).code, 64);
    assert_eq!(run(&["frobnicate"]).code, 64);
    assert_eq!(run(&["--help"]).code, 0);
}

#[test]
fn capacity_failure_without_autoshrink() {
    let r = run(&["construct", "--mode", "kpower", "--x", "10000", "--k", "2", "--no-autoshrink"]);
    assert_eq!(r.code, 2);
    assert!(!r.stderr.is_empty());
}

#[test]
fn search_exhaustion_exit_code() {
    // m0 = 7 (mod 30) in reduced mode at x = 200 is the first prime only after several steps
    let r = run(&[
        "construct", "--mode", "kpower", "--x", "200", "--k", "1", "--profile", "explicit", "--z",
        "14.2", "--max-steps", "0",
    ]);
    assert_eq!(r.code, 3, "{}", r.stderr);
}

#[test]
fn verify_accepts_and_rejects() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("micro.json");
    let doc = micro_to(&path);
    let r = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(r.stdout.contains("witnesses      PASS"));

    let mut bad = doc.clone();
    let target = bad.cover.iter().position(|e| e.u == 4).unwrap();
    bad.cover[target].witness_prime = 11;
    let bad_path = dir.path().join("bad.json");
    fs::write(&bad_path, bad.to_json()).unwrap();
    let r = run(&["verify", bad_path.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("u = 4:"), "{}", r.stdout);
    assert!(r.stdout.contains("witnesses      FAIL"));
}

#[test]
fn verify_reports_missing_offsets_and_bad_congruences() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("micro.json");
    let doc = micro_to(&path);

    let mut gap = doc.clone();
    gap.cover.retain(|e| e.u != -3);
    fs::write(&path, gap.to_json()).unwrap();
    let r = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("u = -3: no witness"), "{}", r.stdout);

    let mut cong = doc.clone();
    cong.m0 = "97181827".into();
    cong.m = cong.m0.clone();
    fs::write(&path, cong.to_json()).unwrap();
    let r = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("congruences    FAIL"));

    let mut dup = doc;
    dup.assignment[1].prime = dup.assignment[0].prime;
    fs::write(&path, dup.to_json()).unwrap();
    let r = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("assigned twice"), "{}", r.stdout);
}

#[test]
fn verify_follows_the_progression() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("micro.json");
    let doc = micro_to(&path);
    let m: u64 = doc.m.parse().unwrap();
    let n: u64 = doc.modulus.parse().unwrap();

    // m + 4N = 2 * 3 * 7 * 17 * 1385929 stays squarefree
    let mut moved = doc.clone();
    moved.m = (m + 4 * n).to_string();
    fs::write(&path, moved.to_json()).unwrap();
    let r = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(r.stdout.contains("not at the recorded step"));

    // m + N = 2^3 * 3 * 7 * 17 * 127 * 883 keeps every witness but loses squarefreeness
    let mut moved = doc;
    moved.m = (m + n).to_string();
    fs::write(&path, moved.to_json()).unwrap();
    let r = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("progression    PASS"));
    assert!(r.stdout.contains("witnesses      PASS"));
    assert!(r.stdout.contains("squarefree     FAIL"));
    assert!(r.stdout.contains("tier changed: proven -> not_squarefree:2"), "{}", r.stdout);
}

#[test]
fn verify_document_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("junk.json");
    fs::write(&path, "{\"format_version\": 1").unwrap();
    assert_eq!(run(&["verify", path.to_str().unwrap()]).code, 65);
    fs::write(&path, "[]").unwrap();
    assert_eq!(run(&["verify", path.to_str().unwrap()]).code, 65);

    let doc_path = dir.path().join("micro.json");
    let mut doc = micro_to(&doc_path);
    doc.m = "12x".into();
    fs::write(&path, doc.to_json()).unwrap();
    assert_eq!(run(&["verify", path.to_str().unwrap()]).code, 65);
    doc.m = "1".into();
    doc.format_version = "0".into();
    fs::write(&path, doc.to_json()).unwrap();
    assert_eq!(run(&["verify", path.to_str().unwrap()]).code, 65);

    assert_eq!(run(&["verify", dir.path().join("absent.json").to_str().unwrap()]).code, 66);
}

#[test]
fn kpower_certificate_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k1.json");
    let r = run(&[
        "construct", "--mode", "kpower", "--x", "200", "--k", "1", "--profile", "explicit", "--z",
        "14.2", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let r = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(r.stdout.contains("primality      PASS"));

    let mut doc = CertificateDocument::from_json(&fs::read_to_string(&path).unwrap()).unwrap();
    let m: num_bigint::BigUint = doc.m.parse().unwrap();
    doc.m = (m + 30u32).to_string();
    fs::write(&path, doc.to_json()).unwrap();
    let r = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(r.code, 1);
}

#[test]
fn thread_variable() {
    assert_eq!(run_env(MICRO, &[("PRIME_AVOID_THREADS", "0")]).code, 64);
    assert_eq!(run_env(MICRO, &[("PRIME_AVOID_THREADS", "many")]).code, 64);
    let one = run_env(MICRO, &[("PRIME_AVOID_THREADS", "1")]);
    let four = run_env(MICRO, &[("PRIME_AVOID_THREADS", "4")]);
    assert_eq!(one.code, 0);
    assert_eq!(one.stdout, four.stdout);
}

fn json(r: &Run) -> Value {
    serde_json::from_str(&r.stdout).unwrap_or_else(|e| panic!("{e}: {}", r.stdout))
}

#[test]
fn bench_sieve_default_grid() {
    let r = run(&["bench-sieve"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json(&r);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 16);
    for row in rows {
        assert!(row["ratio"].as_f64().unwrap() >= 1.0);
        assert!(row["bound"].as_f64().unwrap() >= row["empirical"].as_f64().unwrap());
    }
}

#[test]
fn bench_sieve_trivial_instance_and_skips() {
    let r = run(&["bench-sieve", "--omega-zero", "--range", "1000", "--lambdas", "0.2,0.3", "--bs", "1", "--kappas", "2"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json(&r);
    assert_eq!(v["empirical"], 1000);
    let rows = v["rows"].as_array().unwrap();
    let bound = rows[0]["bound"].as_f64().unwrap();
    assert_eq!(rows[0]["ratio"].as_f64().unwrap(), bound / 1000.0);
    assert!(bound >= 1000.0);
    assert_eq!(rows[1]["admissible"], false);
    assert!(rows[1]["skipped"].as_str().unwrap().contains("outside (0, 1)"));
    assert!(rows[1].get("bound").is_none());
}

#[test]
fn bench_sieve_bad_flags() {
    assert_eq!(run(&["bench-sieve", "--range", "0"]).code, 64);
    assert_eq!(run(&["bench-sieve", "--lambdas", "abc"]).code, 64);
}

#[test]
fn matrix_scan_behaviour() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k1.json");
    let r = run(&[
        "construct", "--mode", "kpower", "--x", "200", "--k", "1", "--profile", "explicit", "--z",
        "14.2", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0);
    let p = path.to_str().unwrap();

    let v = json(&run(&["matrix-scan", "--certificate", p, "--rows", "0"]));
    assert_eq!(v["n0"], 0);
    assert_eq!(v["n1"], 0);
    assert!(v["ratio"].is_null());

    let v = json(&run(&["matrix-scan", "--certificate", p, "--rows", "100"]));
    let n0 = v["n0"].as_u64().unwrap();
    assert!(n0 >= 1);
    // k = 1 has no exceptional columns, so every prime row avoids primes
    assert_eq!(v["n1"], 0);
    assert_eq!(v["avoiding_rows"].as_array().unwrap().len() as u64, n0);

    let missing = dir.path().join("none.json");
    assert_eq!(run(&["matrix-scan", "--certificate", missing.to_str().unwrap(), "--rows", "1"]).code, 66);

    let sq = dir.path().join("sq.json");
    micro_to(&sq);
    assert_eq!(run(&["matrix-scan", "--certificate", sq.to_str().unwrap(), "--rows", "1"]).code, 65);
}
