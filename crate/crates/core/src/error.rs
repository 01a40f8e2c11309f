use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An iterated logarithm left its domain; `level` is the 1-based
    /// logarithm that received a non-positive argument.
    #[error("iterated logarithm undefined: level {level} received {value}")]
    LogDomain { level: u32, value: f64 },
    #[error("{0}")]
    Domain(String),
    #[error("{n} is too large to factor by trial division (limit {limit})")]
    TooLargeToFactor { n: u64, limit: u64 },
    #[error("duplicate modulus {0} in congruence system")]
    DuplicateModulus(u64),
    #[error("invalid congruence {residue} mod {modulus}")]
    InvalidCongruence { residue: u64, modulus: u64 },
    #[error("schedule is degenerate: z = {z} <= log x = {log_x}")]
    DegenerateSchedule { z: f64, log_x: f64 },
    #[error("x/(40k) = {cutoff} <= z = {z}: the upper class of small primes is empty; use x > (40k)^2 in the practical profile or pin z explicitly")]
    CutoffBelowZ { cutoff: f64, z: f64 },
    #[error("capacity failure: {needed} offsets need covering primes but only {available} are available")]
    Capacity { needed: usize, available: usize },
    #[error("search exhausted after {steps} steps ({tests} primality/squarefree tests)")]
    SearchExhausted { steps: u64, tests: u64 },
    #[error("gcd(m0, modulus) = {0} > 1; the progression holds no large primes")]
    NotCoprime(String),
    #[error("offset {u} has no witness prime")]
    Uncovered { u: i64 },
    #[error("matched offset {u} was given the zero root modulo {p}")]
    ZeroRoot { u: i64, p: u64 },
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
