//! Independent re-check of a certificate document.
//!
//! Nothing here reuses the construction path: congruences, witnesses and
//! statuses are recomputed from the document alone.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use prime_avoid_core::kpower::{classify_value, EXCEPTION_TRIAL_BOUND};
use prime_avoid_core::numtheory::{
    is_prime, is_prime_u64, pow_mod, primes_upto, reduce, squarefree_status, SQUAREFREE_TRIAL_BOUND,
};
use rayon::prelude::*;

use crate::document::{
    parse_big, squarefree_status_str, window_status_str, CertificateDocument, DocumentError, Mode,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub name: &'static str,
    pub passed: bool,
    pub details: Vec<String>,
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub sections: Vec<Section>,
    /// Informational lines that do not affect the verdict.
    pub notes: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.sections.iter().all(|s| s.passed)
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    fn push(&mut self, name: &'static str, details: Vec<String>) {
        self.sections.push(Section { name, passed: details.is_empty(), details });
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.sections {
            writeln!(f, "{:<14} {}", s.name, if s.passed { "PASS" } else { "FAIL" })?;
            for d in s.details.iter().take(20) {
                writeln!(f, "    {d}")?;
            }
            if s.details.len() > 20 {
                writeln!(f, "    ... {} more", s.details.len() - 20)?;
            }
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}

/// `base + u - 1` for k-power documents, `base + u` for squarefree ones.
fn offset_value(base: &BigUint, shift: i64) -> Option<BigUint> {
    if shift >= 0 {
        Some(base + shift.unsigned_abs())
    } else {
        let d = BigUint::from(shift.unsigned_abs());
        (*base >= d).then(|| base - d)
    }
}

pub fn verify_document(doc: &CertificateDocument) -> Result<VerifyReport, DocumentError> {
    let modulus = doc.big("modulus")?;
    let m0 = doc.big("m0")?;
    let m = doc.big("m")?;
    let mut congruences = Vec::with_capacity(doc.congruences.len());
    for c in &doc.congruences {
        let r = parse_big("congruences.residue", &c.residue)?;
        let p = parse_big("congruences.modulus", &c.modulus)?;
        congruences.push((r, p));
    }
    let k = doc.schedule.k;
    let y = doc.schedule.y;
    if y > i64::MAX as u64 / 2 {
        return Err(DocumentError::Field { field: "schedule.y", reason: "radius too large".into() });
    }
    let mut report = VerifyReport::default();

    // congruences: prime moduli, distinct, product, m0 solves them
    let mut errs = Vec::new();
    let mut seen = BTreeSet::new();
    let mut product = BigUint::one();
    let mut residue_of: BTreeMap<u64, u64> = BTreeMap::new();
    for (r, p) in &congruences {
        match (r.to_u64(), p.to_u64()) {
            (Some(r64), Some(p64)) => {
                if !is_prime_u64(p64) {
                    errs.push(format!("modulus {p64} is not prime"));
                }
                if r64 >= p64 {
                    errs.push(format!("residue {r64} not reduced modulo {p64}"));
                }
                if !seen.insert(p64) {
                    errs.push(format!("modulus {p64} repeated"));
                }
                residue_of.insert(p64, r64);
            }
            _ => errs.push(format!("congruence {r} mod {p} exceeds 64 bits")),
        }
        product *= p;
        if p.is_zero() || &m0 % p != *r {
            errs.push(format!("m0 fails m0 = {r} (mod {p})"));
        }
    }
    if product != modulus {
        errs.push("product of moduli differs from the recorded modulus".to_owned());
    }
    let m0_ok = match doc.mode {
        Mode::Squarefree => !m0.is_zero() && m0 <= modulus,
        Mode::Kpower => m0 < modulus,
    };
    if !m0_ok {
        errs.push("m0 outside its canonical range".to_owned());
    }
    report.push("congruences", errs);

    // progression membership
    let mut errs = Vec::new();
    if modulus.is_zero() || m < m0 || (&m - &m0) % &modulus != BigUint::zero() {
        errs.push("m is not m0 + j*modulus with j >= 0".to_owned());
    } else if BigUint::from(doc.j) * &modulus + &m0 != m {
        report.notes.push(format!(
            "m lies in the progression but not at the recorded step j = {}",
            doc.j
        ));
    }
    report.push("progression", errs);

    // assignment: injective, consistent with the congruences
    let mut errs = Vec::new();
    let mut primes_used = BTreeSet::new();
    let mut offsets_used = BTreeSet::new();
    for a in &doc.assignment {
        if !primes_used.insert(a.prime) {
            errs.push(format!("u = {}: prime {} assigned twice", a.u, a.prime));
        }
        if !offsets_used.insert(a.u) {
            errs.push(format!("u = {}: offset assigned twice", a.u));
        }
        let Some(&r) = residue_of.get(&a.prime) else {
            errs.push(format!("u = {}: prime {} has no congruence", a.u, a.prime));
            continue;
        };
        match doc.mode {
            Mode::Squarefree => {
                if r != reduce(-a.u, a.prime) {
                    errs.push(format!("u = {}: congruence mod {} is not -u", a.u, a.prime));
                }
            }
            Mode::Kpower => match a.root {
                Some(root) if root % a.prime != 0 && root % a.prime == r => {
                    let lhs = (pow_mod(root, k as u64, a.prime) + reduce(a.u - 1, a.prime)) % a.prime;
                    if lhs != 0 {
                        errs.push(format!("u = {}: root {root} is not a k-th root of 1 - u mod {}", a.u, a.prime));
                    }
                }
                _ => errs.push(format!("u = {}: root missing, zero or not the congruence residue", a.u)),
            },
        }
    }
    report.push("assignment", errs);

    // witnesses divide, are proper, and are prime
    let base = match doc.mode {
        Mode::Squarefree => m.clone(),
        Mode::Kpower => m.pow(k),
    };
    let shift = |u: i64| match doc.mode {
        Mode::Squarefree => u,
        Mode::Kpower => u - 1,
    };
    let mut errs: Vec<(i64, String)> = doc
        .cover
        .par_iter()
        .filter_map(|e| {
            let u = e.u;
            let p = e.witness_prime;
            if p < 2 || !is_prime_u64(p) {
                return Some((u, format!("u = {u}: witness {p} is not prime")));
            }
            let Some(v) = offset_value(&base, shift(u)) else {
                return Some((u, format!("u = {u}: value is negative")));
            };
            if !(&v % p).is_zero() {
                return Some((u, format!("u = {u}: witness {p} does not divide the value")));
            }
            if v <= BigUint::from(p) {
                return Some((u, format!("u = {u}: value does not exceed witness {p}")));
            }
            None
        })
        .collect();
    errs.sort();
    report.push("witnesses", errs.into_iter().map(|(_, s)| s).collect());

    // every offset is accounted for exactly once
    let mut errs = Vec::new();
    let mut count: BTreeMap<i64, usize> = BTreeMap::new();
    for u in doc.cover.iter().map(|e| e.u).chain(doc.exceptions.iter().map(|e| e.u)) {
        *count.entry(u).or_default() += 1;
    }
    if doc.mode == Mode::Kpower {
        *count.entry(1).or_default() += 1;
    }
    let yi = y as i64;
    for u in -yi..=yi {
        match count.remove(&u).unwrap_or(0) {
            1 => {}
            0 => errs.push(format!("u = {u}: no witness and no exception")),
            n => errs.push(format!("u = {u}: listed {n} times")),
        }
    }
    for u in count.keys() {
        errs.push(format!("u = {u}: outside the window [-{y}, {y}]"));
    }
    if doc.mode == Mode::Squarefree && !doc.exceptions.is_empty() {
        errs.push("squarefree certificates cannot carry exceptions".to_owned());
    }
    report.push("coverage", errs);

    match doc.mode {
        Mode::Squarefree => verify_squarefree(doc, &m, &mut report),
        Mode::Kpower => verify_kpower(doc, &m, &base, &mut report),
    }
    Ok(report)
}

fn trial_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_upto(SQUAREFREE_TRIAL_BOUND))
}

fn verify_squarefree(doc: &CertificateDocument, m: &BigUint, report: &mut VerifyReport) {
    let status = squarefree_status(m, trial_primes(), SQUAREFREE_TRIAL_BOUND, doc.seed);
    let now = squarefree_status_str(&status);
    let mut errs = Vec::new();
    if !status.is_acceptable() {
        errs.push(format!("m is not squarefree ({now})"));
    }
    match &doc.squarefree_status {
        Some(recorded) if *recorded == now => {}
        Some(recorded) => report.notes.push(format!("squarefree tier changed: {recorded} -> {now}")),
        None => errs.push("squarefree_status missing".to_owned()),
    }
    report.push("squarefree", errs);
}

fn verify_kpower(doc: &CertificateDocument, m: &BigUint, mk: &BigUint, report: &mut VerifyReport) {
    let errs = if is_prime(m, doc.seed) {
        Vec::new()
    } else {
        vec!["m is not prime".to_owned()]
    };
    report.push("primality", errs);

    let small = primes_upto(EXCEPTION_TRIAL_BOUND);
    let mut errs: Vec<(i64, String)> = doc
        .exceptions
        .par_iter()
        .filter_map(|e| {
            let u = e.u;
            let Some(v) = offset_value(mk, u - 1) else {
                return Some((u, format!("u = {u}: value is negative")));
            };
            let now = window_status_str(&classify_value(&v, &small, doc.seed));
            (now != e.status).then(|| (u, format!("u = {u}: status {} recorded, {now} found", e.status)))
        })
        .collect();
    errs.sort();
    let mut errs: Vec<String> = errs.into_iter().map(|(_, s)| s).collect();
    let primes = doc.exceptions.iter().filter(|e| e.status == "prime").count();
    if primes != doc.metrics.prime_count_in_window {
        errs.push(format!(
            "prime_count_in_window = {} but {primes} exceptions are prime",
            doc.metrics.prime_count_in_window
        ));
    }
    let allowed: Option<BTreeSet<i64>> = doc.sets.get("U6").and_then(|s| s.elements.as_ref()).map(|u6| {
        u6.iter().copied().chain(doc.unmatched.iter().copied()).collect()
    });
    if let Some(allowed) = allowed {
        for e in &doc.exceptions {
            if !allowed.contains(&e.u) {
                errs.push(format!("u = {}: exception outside U6 and the unmatched offsets", e.u));
            }
        }
    }
    report.push("exceptions", errs);
}
