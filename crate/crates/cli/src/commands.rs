//! Subcommand implementations and the exit-code contract.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use prime_avoid_core::kpower::{construct_k, matrix_scan, KOptions};
use prime_avoid_core::numtheory::{primes_upto, SQUAREFREE_TRIAL_BOUND};
use prime_avoid_core::schedule::make_schedule;
use prime_avoid_core::sievebound::{
    admissibility, brun_upper_bound, empirical_sifted_count, is_admissible, forbidden_class_rules, omega_of,
    SieveInstance,
};
use prime_avoid_core::squarefree::{construct, SearchOptions};
use prime_avoid_core::{Error, Profile, ScheduleOverrides};
use serde::Serialize;

use crate::args::{BenchArgs, ConstructArgs, MatrixArgs, ModeArg, OnOff, VerifyArgs};
use crate::document::{CertificateDocument, Mode};
use crate::verify::verify_document;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CAPACITY: i32 = 2;
pub const EXIT_EXHAUSTED: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_NO_INPUT: i32 = 66;

fn exit_for(e: &Error) -> i32 {
    match e {
        Error::Capacity { .. } | Error::CutoffBelowZ { .. } | Error::DegenerateSchedule { .. } => {
            EXIT_CAPACITY
        }
        Error::SearchExhausted { .. } => EXIT_EXHAUSTED,
        Error::LogDomain { .. } | Error::Domain(_) => EXIT_USAGE,
        _ => EXIT_CAPACITY,
    }
}

fn write_output(text: &str, path: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match path {
        Some(p) => match fs::write(p, text) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(err, "error: cannot write {}: {e}", p.display());
                EXIT_NO_INPUT
            }
        },
        None => match out.write_all(text.as_bytes()) {
            Ok(()) => EXIT_OK,
            Err(_) => EXIT_NO_INPUT,
        },
    }
}

pub fn construct_document(a: &ConstructArgs) -> Result<CertificateDocument, (i32, String)> {
    let mode = match a.mode {
        ModeArg::Squarefree => Mode::Squarefree,
        ModeArg::Kpower => Mode::Kpower,
    };
    let k = a.k.unwrap_or(match mode {
        Mode::Squarefree => 1,
        Mode::Kpower => 2,
    });
    if mode == Mode::Squarefree && k != 1 {
        return Err((EXIT_USAGE, "--k only applies to --mode kpower".into()));
    }
    if mode == Mode::Squarefree && a.reduced_modulus.is_some() {
        return Err((EXIT_USAGE, "--reduced-modulus only applies to --mode kpower".into()));
    }
    let profile: Profile = a.profile.parse().map_err(|e| (EXIT_USAGE, format!("{e}")))?;
    let overrides = ScheduleOverrides {
        c1: a.c1,
        c2: a.c2,
        z: a.z,
        y: a.y,
        delta: a.delta,
        autoshrink: Some(!a.no_autoshrink),
    };
    let sch = make_schedule(a.x, k, profile, overrides).map_err(|e| (exit_for(&e), format!("{e}")))?;
    let fail = |e: Error| (exit_for(&e), format!("{e}"));
    match mode {
        Mode::Squarefree => {
            let opts = SearchOptions {
                max_steps: a.max_steps.unwrap_or(SearchOptions::default().max_steps),
                trial_bound: SQUAREFREE_TRIAL_BOUND,
                seed: a.seed,
            };
            construct(&sch, &opts).map(|c| CertificateDocument::from(&c)).map_err(fail)
        }
        Mode::Kpower => {
            let opts = KOptions {
                reduced: a.reduced_modulus != Some(OnOff::Off),
                max_steps: a.max_steps.unwrap_or(KOptions::default().max_steps),
                seed: a.seed,
            };
            construct_k(&sch, &opts).map(|c| CertificateDocument::from(&c)).map_err(fail)
        }
    }
}

pub fn cmd_construct(a: &ConstructArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match construct_document(a) {
        Ok(doc) => write_output(&doc.to_json(), a.out.as_deref(), out, err),
        Err((code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

pub enum LoadError {
    Missing(String),
    Malformed(String),
}

pub fn load_document(path: &Path) -> Result<CertificateDocument, LoadError> {
    let text = fs::read_to_string(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => LoadError::Missing(format!("{}: no such file", path.display())),
        io::ErrorKind::InvalidData => LoadError::Malformed(format!("{}: not UTF-8", path.display())),
        _ => LoadError::Missing(format!("{}: {e}", path.display())),
    })?;
    CertificateDocument::from_json(&text).map_err(|e| LoadError::Malformed(format!("{e}")))
}

fn load_or_exit(path: &Path, err: &mut dyn Write) -> Result<CertificateDocument, i32> {
    load_document(path).map_err(|e| match e {
        LoadError::Missing(m) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_NO_INPUT
        }
        LoadError::Malformed(m) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_DATA
        }
    })
}

pub fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let doc = match load_or_exit(&a.path, err) {
        Ok(d) => d,
        Err(code) => return code,
    };
    match verify_document(&doc) {
        Ok(report) => {
            let _ = write!(out, "{report}");
            if report.passed() {
                let _ = writeln!(out, "verdict: PASS");
                EXIT_OK
            } else {
                let _ = writeln!(out, "verdict: FAIL");
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DATA
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub lambda: f64,
    pub b: u32,
    pub kappa: f64,
    pub admissible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w_z: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub main_term: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_budget: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    pub empirical: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub range: u64,
    pub z: f64,
    pub k: u32,
    pub x: f64,
    pub omega_zero: bool,
    pub sieve_c: f64,
    pub error_constant: f64,
    pub p1: Vec<u64>,
    pub p2: Vec<u64>,
    pub empirical: u64,
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn violations(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.bound.is_some_and(|b| (r.empirical as f64) > b))
            .count()
    }
}

/// Prime classes of the k-power construction below the sieving level:
/// the lower and upper `P1` pieces and the middle class.
pub fn sieve_classes(x: f64, k: u32, z: f64) -> (Vec<u64>, Vec<u64>) {
    let log_x = x.ln();
    let split = x.sqrt();
    let cutoff = x / (40.0 * k as f64);
    let mut p1 = Vec::new();
    let mut p2 = Vec::new();
    for p in primes_upto(z.ceil() as u64) {
        let pf = p as f64;
        if pf >= z {
            break;
        }
        if pf <= log_x || (pf > split && pf <= cutoff) {
            p1.push(p);
        } else if pf <= split {
            p2.push(p);
        }
    }
    (p1, p2)
}

pub fn bench_report(a: &BenchArgs) -> Result<BenchReport, String> {
    if a.range == 0 {
        return Err("--range must be positive".into());
    }
    if !(a.z > 1.0) {
        return Err("--z must exceed 1".into());
    }
    if a.k == 0 {
        return Err("--k must be at least 1".into());
    }
    let (p1, p2, rules) = if a.omega_zero {
        (Vec::new(), Vec::new(), BTreeMap::new())
    } else {
        let (p1, p2) = sieve_classes(a.x, a.k, a.z);
        let rules = forbidden_class_rules(&p1, &p2, a.k);
        (p1, p2, rules)
    };
    let omega = omega_of(&rules);
    let empirical = empirical_sifted_count(a.range, &rules, a.z);
    let mut rows = Vec::new();
    for &lambda in &a.lambdas {
        for &b in &a.bs {
            for &kappa in &a.kappas {
                let mut row = BenchRow {
                    lambda,
                    b,
                    kappa,
                    admissible: is_admissible(lambda),
                    skipped: None,
                    w_z: None,
                    main_term: None,
                    error_budget: None,
                    bound: None,
                    empirical,
                    ratio: None,
                };
                if !row.admissible {
                    row.skipped = Some(format!(
                        "lambda e^(1+lambda) = {:.6} outside (0, 1)",
                        admissibility(lambda)
                    ));
                    rows.push(row);
                    continue;
                }
                let inst = SieveInstance {
                    size: a.range,
                    omega: omega.clone(),
                    z: a.z,
                    kappa,
                    a1: 1.0,
                    a2: 1.0,
                    lambda,
                    b,
                    sieve_c: a.sieve_c,
                    error_constant: a.error_constant,
                }
                .with_minimal_constants();
                match brun_upper_bound(&inst) {
                    Ok(bound) => {
                        row.w_z = Some(bound.w_z);
                        row.main_term = Some(bound.main_term);
                        row.error_budget = Some(bound.error_budget);
                        row.bound = Some(bound.total);
                        row.ratio = Some(if empirical == 0 {
                            f64::INFINITY
                        } else {
                            bound.total / empirical as f64
                        });
                    }
                    Err(e) => {
                        row.admissible = false;
                        row.skipped = Some(format!("{e}"));
                    }
                }
                rows.push(row);
            }
        }
    }
    Ok(BenchReport {
        range: a.range,
        z: a.z,
        k: a.k,
        x: a.x,
        omega_zero: a.omega_zero,
        sieve_c: a.sieve_c,
        error_constant: a.error_constant,
        p1,
        p2,
        empirical,
        rows,
    })
}

pub fn cmd_bench_sieve(a: &BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let report = match bench_report(a) {
        Ok(r) => r,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    let code = write_output(&text, None, out, err);
    let bad = report.violations();
    if bad > 0 {
        let _ = writeln!(err, "error: empirical count exceeds the bound on {bad} row(s)");
        return EXIT_CHECK_FAILED;
    }
    code
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub rows: u64,
    pub n0: u64,
    pub n1: u64,
    pub ratio: Option<f64>,
    pub avoiding_rows: Vec<u64>,
    pub exceptional_columns: Vec<i64>,
}

pub fn scan_document(doc: &CertificateDocument, rows: u64, seed: u64) -> Result<ScanReport, String> {
    if doc.mode != Mode::Kpower {
        return Err("matrix-scan needs a kpower certificate".into());
    }
    let m0 = doc.big("m0").map_err(|e| e.to_string())?;
    let modulus = doc.big("modulus").map_err(|e| e.to_string())?;
    let columns: Vec<i64> = doc.exceptions.iter().map(|e| e.u).collect();
    let r = matrix_scan(&m0, &modulus, doc.schedule.k, rows, &columns, seed);
    Ok(ScanReport {
        rows: r.rows,
        n0: r.n0,
        n1: r.n1,
        ratio: r.ratio(),
        avoiding_rows: r.avoiding_rows,
        exceptional_columns: columns,
    })
}

pub fn cmd_matrix_scan(a: &MatrixArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let doc = match load_or_exit(&a.certificate, err) {
        Ok(d) => d,
        Err(code) => return code,
    };
    match scan_document(&doc, a.rows, a.seed.unwrap_or(doc.seed)) {
        Ok(report) => {
            let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
            text.push('\n');
            write_output(&text, None, out, err)
        }
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_DATA
        }
    }
}
