//! JSON certificate format.
//!
//! Big integers travel as decimal strings. Set element lists are written out
//! when they hold at most [`ELEMENT_LIST_CAP`] entries; the cardinality is
//! always present.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use prime_avoid_core::kpower::{KCertificate, WindowStatus};
use prime_avoid_core::numtheory::{ln_natural, SquarefreeStatus};
use prime_avoid_core::squarefree::{AvoidanceCertificate, ShrinkStep};
use prime_avoid_core::{Congruence, Profile, Schedule};
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: &str = "1";
pub const ELEMENT_LIST_CAP: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Squarefree,
    Kpower,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleDoc {
    pub x: f64,
    pub k: u32,
    pub c1: f64,
    pub c2: f64,
    pub z: f64,
    pub y: u64,
    pub profile: String,
    pub delta: f64,
    pub c2_autoshrink: bool,
    pub degenerate: bool,
}

impl From<&Schedule> for ScheduleDoc {
    fn from(s: &Schedule) -> Self {
        Self {
            x: s.x,
            k: s.k,
            c1: s.c1,
            c2: s.c2,
            z: s.z,
            y: s.y,
            profile: s.profile.as_str().to_owned(),
            delta: s.delta,
            c2_autoshrink: s.c2_autoshrink,
            degenerate: s.degenerate,
        }
    }
}

impl ScheduleDoc {
    pub fn to_schedule(&self) -> Result<Schedule, String> {
        let profile: Profile = self.profile.parse().map_err(|e| format!("{e}"))?;
        Ok(Schedule {
            x: self.x,
            k: self.k,
            c1: self.c1,
            c2: self.c2,
            z: self.z,
            y: self.y,
            profile,
            delta: self.delta,
            c2_autoshrink: self.c2_autoshrink,
            degenerate: self.degenerate,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetEntry {
    pub count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<i64>>,
}

impl SetEntry {
    pub fn of<T: Copy + TryInto<i64>>(items: &[T]) -> Self {
        let elements = (items.len() <= ELEMENT_LIST_CAP).then(|| {
            items.iter().filter_map(|&v| v.try_into().ok()).collect()
        });
        Self { count: items.len(), elements }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceDoc {
    pub residue: String,
    pub modulus: String,
}

impl From<&Congruence> for CongruenceDoc {
    fn from(c: &Congruence) -> Self {
        Self { residue: c.residue().to_string(), modulus: c.modulus().to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentDoc {
    pub u: i64,
    pub prime: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverEntry {
    pub u: i64,
    pub witness_prime: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionEntry {
    pub u: i64,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShrinkDoc {
    pub y: u64,
    pub needed: usize,
    pub available: usize,
}

impl From<&ShrinkStep> for ShrinkDoc {
    fn from(s: &ShrinkStep) -> Self {
        Self { y: s.y, needed: s.needed, available: s.available }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub log_m: f64,
    pub log_modulus: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent_report: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub avoidance_constant: Option<f64>,
    pub prime_count_in_window: usize,
    pub autoshrink_trace: Vec<ShrinkDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub format_version: String,
    pub generator: String,
    pub mode: Mode,
    pub schedule: ScheduleDoc,
    pub sets: BTreeMap<String, SetEntry>,
    pub assignment: Vec<AssignmentDoc>,
    #[serde(default)]
    pub unmatched: Vec<i64>,
    pub congruences: Vec<CongruenceDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduced_modulus: Option<bool>,
    pub modulus: String,
    pub m0: String,
    pub m: String,
    pub j: u64,
    pub cover: Vec<CoverEntry>,
    pub exceptions: Vec<ExceptionEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub squarefree_status: Option<String>,
    pub metrics: Metrics,
    #[serde(default)]
    pub notes: Vec<String>,
    pub seed: u64,
}

pub fn squarefree_status_str(s: &SquarefreeStatus) -> String {
    match s {
        SquarefreeStatus::Proven => "proven".to_owned(),
        SquarefreeStatus::Partial { bound } => format!("partial:{bound}"),
        SquarefreeStatus::NotSquarefree { p } => format!("not_squarefree:{p}"),
    }
}

pub fn window_status_str(s: &WindowStatus) -> String {
    match s {
        WindowStatus::CompositeWitness(p) => format!("composite:{p}"),
        WindowStatus::Composite => "composite".to_owned(),
        WindowStatus::Prime => "prime".to_owned(),
    }
}

pub fn generator() -> String {
    format!("prime-avoid {}", env!("CARGO_PKG_VERSION"))
}

impl From<&AvoidanceCertificate> for CertificateDocument {
    fn from(c: &AvoidanceCertificate) -> Self {
        let s = &c.sets;
        let sets = [
            ("P1", SetEntry::of(&s.p1)),
            ("P2", SetEntry::of(&s.p2)),
            ("P3", SetEntry::of(&s.p3)),
            ("U1", SetEntry::of(&s.u1)),
            ("U2", SetEntry::of(&s.u2)),
            ("U3", SetEntry::of(&s.u3)),
            ("U4", SetEntry::of(&s.u4)),
            ("U5", SetEntry::of(&s.u5)),
            ("U6", SetEntry::of(&s.u6)),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_owned(), v))
        .collect();
        Self {
            format_version: FORMAT_VERSION.to_owned(),
            generator: generator(),
            mode: Mode::Squarefree,
            schedule: (&c.schedule).into(),
            sets,
            assignment: c
                .phi
                .iter()
                .map(|(&u, &prime)| AssignmentDoc { u, prime, root: None })
                .collect(),
            unmatched: Vec::new(),
            congruences: c.congruences.iter().map(Into::into).collect(),
            reduced_modulus: None,
            modulus: c.modulus.to_string(),
            m0: c.m0.to_string(),
            m: c.m.to_string(),
            j: c.j,
            cover: c
                .cover
                .iter()
                .map(|(u, w)| CoverEntry { u: *u, witness_prime: w.p })
                .collect(),
            exceptions: Vec::new(),
            squarefree_status: Some(squarefree_status_str(&c.squarefree_status)),
            metrics: Metrics {
                log_m: ln_natural(&c.m),
                log_modulus: ln_natural(&c.modulus),
                exponent_report: Some(c.exponent_report),
                avoidance_constant: c.avoidance_constant,
                prime_count_in_window: 0,
                autoshrink_trace: c.shrink_trace.iter().map(Into::into).collect(),
            },
            notes: Vec::new(),
            seed: c.seed,
        }
    }
}

impl From<&KCertificate> for CertificateDocument {
    fn from(c: &KCertificate) -> Self {
        let s = &c.sets;
        let u4_in_u2: Vec<i64> =
            s.u4.iter().copied().filter(|u| s.u2.binary_search(u).is_ok()).collect();
        let matched: Vec<u64> = c.matching.matched.values().map(|&(p, _)| p).collect();
        let sets = [
            ("P1", SetEntry::of(&s.p1)),
            ("P2", SetEntry::of(&s.p2)),
            ("P3tilde", SetEntry::of(&s.p3_tilde)),
            ("P3", SetEntry::of(&matched)),
            ("U1", SetEntry::of(&s.u1)),
            ("U2", SetEntry::of(&s.u2)),
            ("U3", SetEntry::of(&s.u3)),
            ("U4", SetEntry::of(&s.u4)),
            ("U4_in_U2", SetEntry::of(&u4_in_u2)),
            ("U5", SetEntry::of(&s.u5)),
            ("U6", SetEntry::of(&s.u6)),
            ("U7", SetEntry::of(&s.u7)),
            ("residual", SetEntry::of(&s.residual)),
            ("matching_domain", SetEntry::of(&s.domain)),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_owned(), v))
        .collect();
        Self {
            format_version: FORMAT_VERSION.to_owned(),
            generator: generator(),
            mode: Mode::Kpower,
            schedule: (&c.schedule).into(),
            sets,
            assignment: c
                .matching
                .matched
                .iter()
                .map(|(&u, &(prime, root))| AssignmentDoc { u, prime, root: Some(root) })
                .collect(),
            unmatched: c.matching.unmatched.clone(),
            congruences: c.congruences.iter().map(Into::into).collect(),
            reduced_modulus: Some(c.reduced),
            modulus: c.modulus.to_string(),
            m0: c.m0.to_string(),
            m: c.m.to_string(),
            j: c.j,
            cover: c
                .cover
                .iter()
                .map(|(u, w)| CoverEntry { u: *u, witness_prime: w.p })
                .collect(),
            exceptions: c
                .exceptions
                .iter()
                .map(|(u, st)| ExceptionEntry { u: *u, status: window_status_str(st) })
                .collect(),
            squarefree_status: None,
            metrics: Metrics {
                log_m: ln_natural(&c.m),
                log_modulus: ln_natural(&c.modulus),
                exponent_report: None,
                avoidance_constant: None,
                prime_count_in_window: c.prime_count_in_window,
                autoshrink_trace: c.shrink_trace.iter().map(Into::into).collect(),
            },
            notes: vec![
                "offsets are matched on U7 minus offsets already covered by the P1 and P2 congruences; U4 is read without the U2 restriction".to_owned(),
                "u = 1 is the constructed prime power m^k and is not covered".to_owned(),
            ],
            seed: c.seed,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error("malformed certificate: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format version {0:?}")]
    Version(String),
    #[error("field {field}: {reason}")]
    Field { field: &'static str, reason: String },
}

impl CertificateDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        let doc: Self = serde_json::from_str(text)?;
        if doc.format_version != FORMAT_VERSION {
            return Err(DocumentError::Version(doc.format_version));
        }
        Ok(doc)
    }

    pub fn big(&self, field: &'static str) -> Result<BigUint, DocumentError> {
        let text = match field {
            "modulus" => &self.modulus,
            "m0" => &self.m0,
            "m" => &self.m,
            _ => unreachable!("unknown big-integer field"),
        };
        parse_big(field, text)
    }
}

pub fn parse_big(field: &'static str, text: &str) -> Result<BigUint, DocumentError> {
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(DocumentError::Field { field, reason: format!("not a decimal integer: {text:?}") });
    }
    text.parse()
        .map_err(|e| DocumentError::Field { field, reason: format!("{e}") })
}
