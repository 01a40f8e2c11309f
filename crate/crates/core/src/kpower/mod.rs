//! Prime-avoiding k-th powers of primes.
//!
//! For a prime `m` the window values are `m^k + u - 1`, `|u| <= y`, so `u = 1`
//! is `m^k` itself. Coverage comes from three congruence families:
//!
//! - `m ≡ 1 (mod p)` on `P1`: `m^k + u - 1 ≡ u`, zero whenever `p | u`;
//! - `m ≡ 2 (mod p)` on `P2`: `m^k + u - 1 ≡ u + 2^k - 1`, zero whenever
//!   `p | u + 2^k - 1`;
//! - `m ≡ m_u (mod p_u)` for a root of `m_u^k ≡ 1 - u (mod p_u)`, one private
//!   prime per remaining offset, chosen by a maximum bipartite matching
//!   between offsets and the primes of `P̃3` whose k-th power residues
//!   contain `1 - u`.
//!
//! Offsets the matching cannot serve (and, for even `k`, the Legendre-screened
//! exceptional set) are reported with a direct primality status instead.

pub mod matching;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::numtheory::{
    crt_solve, is_prime, is_prime_u64, is_probable_prime_base2, is_smooth, jacobi, pow_mod,
    primes_upto, reduce, smallest_nonzero_roots, Congruence, FactorWitness,
};
use crate::schedule::{capacity_check, CapacityVerdict, Profile, Schedule, SetSizes};
use crate::squarefree::{merge_sorted, signed_window, ShrinkStep};
use crate::{Error, Result};

/// Largest supported exponent; keeps `2^k - 1` and `u + 2^k - 1` in `i128`.
pub const MAX_K: u32 = 64;

/// Primes below this bound pre-sieve candidates in [`find_prime_in_ap`].
const PRESIEVE_BOUND: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KSetSystem {
    pub k: u32,
    pub y: u64,
    pub p1: Vec<u64>,
    pub p2: Vec<u64>,
    pub p3_tilde: Vec<u64>,
    pub u1: Vec<i64>,
    pub u2: Vec<i64>,
    pub u3: Vec<i64>,
    pub u4: Vec<i64>,
    pub u5: Vec<i64>,
    pub u6: Vec<i64>,
    pub u7: Vec<i64>,
    /// `U2 \ (U3 ∪ U4)`: offsets with a large prime factor and a cofactor
    /// above 1. Empty whenever the partition law holds.
    pub residual: Vec<i64>,
    /// Offsets that need a private prime: not in `U1`, without a `P2` prime
    /// dividing `u + 2^k - 1`, not exceptional, and not `1`. This contains
    /// `U7 \ U1 \ U6 \ {1}` minus the `P2`-covered offsets, plus `residual`.
    pub domain: Vec<i64>,
}

impl KSetSystem {
    fn shift(&self) -> i128 {
        (1i128 << self.k) - 1
    }

    /// Smallest `p ∈ P2` with `p | u + 2^k - 1`.
    pub fn p2_divisor(&self, u: i64) -> Option<u64> {
        let t = u as i128 + self.shift();
        self.p2.iter().copied().find(|&p| t.rem_euclid(p as i128) == 0)
    }

    pub fn p1_divisor(&self, u: i64) -> Option<u64> {
        let a = u.unsigned_abs();
        self.p1.iter().copied().find(|&p| a % p == 0)
    }
}

fn p3_tilde(sch: &Schedule, primes: &[u64], excluded: &BTreeSet<u64>) -> Vec<u64> {
    let cutoff = sch.x / (40.0 * sch.k as f64);
    let k = sch.k as u64;
    primes
        .iter()
        .copied()
        .filter(|&p| {
            let pf = p as f64;
            let class = if k % 2 == 1 {
                pf <= sch.x && p % 3 == 2
            } else {
                pf <= sch.x / 2.0 && p % (2 * k) == 3
            };
            cutoff < pf && class && !excluded.contains(&p)
        })
        .collect()
}

pub fn build_sets_k(sch: &Schedule) -> Result<KSetSystem> {
    if sch.k == 0 || sch.k > MAX_K {
        return Err(crate::error::domain(alloc::format!("k = {} outside 1..={MAX_K}", sch.k)));
    }
    if sch.degenerate {
        return Err(Error::DegenerateSchedule { z: sch.z, log_x: sch.log_x() });
    }
    let cutoff = sch.x / (40.0 * sch.k as f64);
    if cutoff <= sch.z && sch.profile != Profile::Explicit {
        return Err(Error::CutoffBelowZ { cutoff, z: sch.z });
    }
    let log_x = sch.log_x();
    let primes = primes_upto(libm::floor(sch.x) as u64);
    let mut sets = KSetSystem { k: sch.k, y: sch.y, ..Default::default() };
    for &p in &primes {
        let pf = p as f64;
        if pf <= log_x || (sch.z < pf && pf <= cutoff) {
            sets.p1.push(p);
        } else if pf <= sch.z {
            sets.p2.push(p);
        }
    }
    let small: BTreeSet<u64> = sets.p1.iter().chain(&sets.p2).copied().collect();
    sets.p3_tilde = p3_tilde(sch, &primes, &small);

    for u in signed_window(sch.y) {
        let a = u.unsigned_abs();
        let in_u1 = sets.p1_divisor(u).is_some();
        if in_u1 {
            sets.u1.push(u);
        } else {
            sets.u2.push(u);
        }
        let prime = is_prime_u64(a);
        if prime {
            sets.u3.push(u);
            if sets.p2_divisor(u).is_none() {
                sets.u5.push(u);
            }
        }
        let smooth = a != 0 && is_smooth(a, sch.z)?;
        if smooth {
            sets.u4.push(u);
        }
        if !in_u1 && !prime && !smooth {
            sets.residual.push(u);
        }
    }
    sets.u7 = merge_sorted(&[&sets.u4, &sets.u5]);
    sets.u6 = legendre_screen(sch, &sets.p3_tilde);
    refresh_domain(&mut sets);
    Ok(sets)
}

fn refresh_domain(sets: &mut KSetSystem) {
    let u1: BTreeSet<i64> = sets.u1.iter().copied().collect();
    let u6: BTreeSet<i64> = sets.u6.iter().copied().collect();
    sets.domain = signed_window(sets.y)
        .filter(|&u| {
            u != 1 && !u1.contains(&u) && !u6.contains(&u) && sets.p2_divisor(u).is_none()
        })
        .collect();
}

/// Offsets `u` for which `-u` is a quadratic residue modulo at most
/// `δ x / log x` primes of `P̃3`; empty for odd `k`.
pub fn legendre_screen(sch: &Schedule, p3_tilde: &[u64]) -> Vec<i64> {
    if sch.k % 2 == 1 {
        return Vec::new();
    }
    let threshold = sch.delta * sch.x / sch.log_x();
    signed_window(sch.y)
        .filter(|&u| {
            let hits = p3_tilde
                .iter()
                .filter(|&&p| jacobi(-u, p).is_ok_and(|j| j == 1))
                .count();
            hits as f64 <= threshold
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KMatching {
    /// `u ↦ (p_u, m_u)` with `m_u^k ≡ 1 - u (mod p_u)` and `m_u != 0`.
    pub matched: BTreeMap<i64, (u64, u64)>,
    pub unmatched: Vec<i64>,
}

/// Maximum matching of the coverage domain into `P̃3`. The edge `(u, p)`
/// exists when `1 - u` has a non-zero k-th root modulo `p`; the smallest such
/// root is recorded.
pub fn match_offsets(sets: &KSetSystem) -> KMatching {
    let k = sets.k as u64;
    let tables: Vec<Vec<u64>> = sets
        .p3_tilde
        .iter()
        .map(|&p| smallest_nonzero_roots(k, p))
        .collect();
    let root = |u: i64, idx: usize| -> u64 {
        let p = sets.p3_tilde[idx];
        tables[idx][reduce(1 - u, p) as usize]
    };
    let adj: Vec<Vec<usize>> = sets
        .domain
        .iter()
        .map(|&u| (0..sets.p3_tilde.len()).filter(|&i| root(u, i) != 0).collect())
        .collect();
    let mate = matching::maximum_matching(&adj, sets.p3_tilde.len());
    let mut out = KMatching::default();
    for (&u, m) in sets.domain.iter().zip(mate) {
        match m {
            Some(i) => {
                out.matched.insert(u, (sets.p3_tilde[i], root(u, i)));
            }
            None => out.unmatched.push(u),
        }
    }
    out
}

/// `m ≡ 1` on `P1`, `m ≡ 2` on `P2`, `m ≡ m_u (mod p_u)` for matched pairs,
/// and unless `reduced`, `m ≡ 1` on the remaining primes `<= x`.
pub fn congruences_k(
    sets: &KSetSystem,
    matching: &KMatching,
    x: f64,
    reduced: bool,
) -> Result<Vec<Congruence>> {
    let mut out = Vec::new();
    for &p in &sets.p1 {
        out.push(Congruence::new(1 % p, p)?);
    }
    for &p in &sets.p2 {
        out.push(Congruence::new(2 % p, p)?);
    }
    for (&u, &(p, root)) in &matching.matched {
        if root % p == 0 {
            return Err(Error::ZeroRoot { u, p });
        }
        out.push(Congruence::new(root, p)?);
    }
    if !reduced {
        let used: BTreeSet<u64> = out.iter().map(Congruence::modulus).collect();
        for p in primes_upto(libm::floor(x) as u64) {
            if !used.contains(&p) {
                out.push(Congruence::new(1 % p, p)?);
            }
        }
    }
    Ok(out)
}

/// Solves the system; returns `(modulus, m0, congruences)` with
/// `0 <= m0 < modulus` and `gcd(m0, modulus) = 1`.
pub fn solve_m0_k(
    sets: &KSetSystem,
    matching: &KMatching,
    x: f64,
    reduced: bool,
) -> Result<(BigUint, BigUint, Vec<Congruence>)> {
    let congruences = congruences_k(sets, matching, x, reduced)?;
    let (m0, modulus) = crt_solve(&congruences)?;
    let g = m0.gcd(&modulus);
    if !g.is_one() {
        return Err(Error::NotCoprime(alloc::format!("{g}")));
    }
    Ok((modulus, m0, congruences))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeHit {
    pub m: BigUint,
    /// `m = m0 + j·modulus`, `j >= 1`.
    pub j: u64,
    /// Miller–Rabin evaluations performed (after pre-sieving).
    pub tests: u64,
}

/// Smallest prime `m0 + j·modulus`, `1 <= j <= max_steps`.
pub fn find_prime_in_ap(
    m0: &BigUint,
    modulus: &BigUint,
    max_steps: u64,
    seed: u64,
) -> Result<PrimeHit> {
    if modulus.is_zero() {
        return Err(crate::error::domain("modulus must be positive"));
    }
    let g = m0.gcd(modulus);
    if !g.is_one() {
        return Err(Error::NotCoprime(alloc::format!("{g}")));
    }
    // (m0 mod q, modulus mod q) for small q not dividing the modulus
    let sieve: Vec<(u64, u64, u64)> = primes_upto(PRESIEVE_BOUND)
        .into_iter()
        .filter_map(|q| {
            let s = (modulus % q).to_u64()?;
            (s != 0).then(|| (q, (m0 % q).to_u64().unwrap_or(0), s))
        })
        .collect();
    let mut tests = 0;
    let mut candidate = m0 + modulus;
    for j in 1..=max_steps {
        let survives = sieve.iter().all(|&(q, r, s)| {
            let v = (r as u128 + j as u128 * s as u128) % q as u128;
            // the candidate may itself be the small prime q
            v != 0 || candidate == BigUint::from(q)
        });
        if survives {
            tests += 1;
            if is_probable_prime_base2(&candidate) && is_prime(&candidate, seed) {
                return Ok(PrimeHit { m: candidate, j, tests });
            }
        }
        candidate += modulus;
    }
    Err(Error::SearchExhausted { steps: max_steps, tests })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowStatus {
    /// A prime `p` below the trial bound divides the value.
    CompositeWitness(u64),
    /// Fails a strong-probable-prime round.
    Composite,
    /// Passes [`is_prime`] with the recorded seed.
    Prime,
}

/// Trial bound for exceptional values before Miller–Rabin.
pub const EXCEPTION_TRIAL_BOUND: u64 = 10_000;

pub fn classify_value(value: &BigUint, small_primes: &[u64], seed: u64) -> WindowStatus {
    for &p in small_primes {
        if (value % p).is_zero() && *value != BigUint::from(p) {
            return WindowStatus::CompositeWitness(p);
        }
    }
    if is_prime(value, seed) {
        WindowStatus::Prime
    } else {
        WindowStatus::Composite
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerWindow {
    pub cover: Vec<(i64, FactorWitness)>,
    pub exceptions: Vec<(i64, WindowStatus)>,
    pub prime_count: usize,
}

/// `m^k + u - 1`.
pub fn window_value(mk: &BigUint, u: i64) -> Option<BigUint> {
    let t = u as i128 - 1;
    if t >= 0 {
        Some(mk + t as u128)
    } else {
        let d = BigUint::from(t.unsigned_abs());
        (*mk >= d).then(|| mk - d)
    }
}

/// The witness prime the construction predicts for offset `u`, if any.
pub fn predicted_witness(sets: &KSetSystem, matching: &KMatching, u: i64) -> Option<u64> {
    if u == 1 {
        return None;
    }
    sets.p1_divisor(u)
        .or_else(|| matching.matched.get(&u).map(|&(p, _)| p))
        .or_else(|| sets.p2_divisor(u))
}

pub fn verify_power_window(
    m: &BigUint,
    sets: &KSetSystem,
    matching: &KMatching,
    seed: u64,
) -> Result<PowerWindow> {
    let mk = m.pow(sets.k);
    let small = primes_upto(EXCEPTION_TRIAL_BOUND);
    let mut out = PowerWindow { cover: Vec::new(), exceptions: Vec::new(), prime_count: 0 };
    for u in signed_window(sets.y) {
        if u == 1 {
            continue;
        }
        let value = window_value(&mk, u).ok_or(Error::Uncovered { u })?;
        match predicted_witness(sets, matching, u) {
            Some(p) => {
                let w = FactorWitness::check(value, p)
                    .filter(FactorWitness::certifies_composite)
                    .ok_or(Error::Uncovered { u })?;
                out.cover.push((u, w));
            }
            None => {
                let status = classify_value(&value, &small, seed);
                if status == WindowStatus::Prime {
                    out.prime_count += 1;
                }
                out.exceptions.push((u, status));
            }
        }
    }
    Ok(out)
}

/// `m_u^k + u - 1 ≡ 0 (mod p_u)` for every matched pair.
pub fn matching_is_sound(k: u32, matching: &KMatching) -> bool {
    matching.matched.iter().all(|(&u, &(p, root))| {
        root % p != 0 && (pow_mod(root, k as u64, p) + reduce(u - 1, p)) % p == 0
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MatrixReport {
    pub rows: u64,
    /// Rows `r` with `m0 + r·modulus` prime.
    pub n0: u64,
    /// Of those, rows where some exceptional window value is prime.
    pub n1: u64,
    /// Rows counted in `n0` but not `n1`.
    pub avoiding_rows: Vec<u64>,
}

impl MatrixReport {
    pub fn ratio(&self) -> Option<f64> {
        (self.n0 > 0).then(|| self.n1 as f64 / self.n0 as f64)
    }
}

/// Scans rows `r = 1..=rows` of the matrix `(m0 + r·modulus)^k + u - 1`;
/// only the `exceptional` columns can hold primes.
pub fn matrix_scan(
    m0: &BigUint,
    modulus: &BigUint,
    k: u32,
    rows: u64,
    exceptional: &[i64],
    seed: u64,
) -> MatrixReport {
    let mut report = MatrixReport { rows, ..Default::default() };
    let mut m = m0.clone();
    for r in 1..=rows {
        m += modulus;
        if !is_prime(&m, seed) {
            continue;
        }
        report.n0 += 1;
        let mk = m.pow(k);
        let hit = exceptional
            .iter()
            .filter(|&&u| u != 1)
            .filter_map(|&u| window_value(&mk, u))
            .any(|v| is_probable_prime_base2(&v) && is_prime(&v, seed));
        if hit {
            report.n1 += 1;
        } else {
            report.avoiding_rows.push(r);
        }
    }
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KOptions {
    pub reduced: bool,
    pub max_steps: u64,
    pub seed: u64,
}

impl Default for KOptions {
    fn default() -> Self {
        Self { reduced: true, max_steps: 1_000_000, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KCertificate {
    pub schedule: Schedule,
    pub sets: KSetSystem,
    pub matching: KMatching,
    pub reduced: bool,
    pub congruences: Vec<Congruence>,
    pub modulus: BigUint,
    pub m0: BigUint,
    pub m: BigUint,
    pub j: u64,
    pub primality_tests: u64,
    pub cover: Vec<(i64, FactorWitness)>,
    pub exceptions: Vec<(i64, WindowStatus)>,
    pub prime_count_in_window: usize,
    pub shrink_trace: Vec<ShrinkStep>,
    pub seed: u64,
}

/// Sets for the largest radius (halving from `sch.y`) whose coverage domain
/// fits into `P̃3`.
pub fn fit_radius_k(sch: &Schedule) -> Result<(Schedule, KSetSystem, Vec<ShrinkStep>)> {
    let mut sch = *sch;
    let mut trace = Vec::new();
    loop {
        let sets = build_sets_k(&sch)?;
        let sizes = SetSizes { needed: sets.domain.len(), available: sets.p3_tilde.len() };
        if sizes.available == 0 {
            return Err(Error::Capacity { needed: sizes.needed, available: 0 });
        }
        match capacity_check(&sch, sizes) {
            CapacityVerdict::Ok => return Ok((sch, sets, trace)),
            CapacityVerdict::ShrinkSuggested { new_y } => {
                trace.push(ShrinkStep { y: sch.y, needed: sizes.needed, available: sizes.available });
                sch = sch.with_radius(new_y);
            }
            CapacityVerdict::Fail { needed, available } => {
                return Err(Error::Capacity { needed, available })
            }
        }
    }
}

/// Full k-th power pipeline.
pub fn construct_k(sch: &Schedule, opts: &KOptions) -> Result<KCertificate> {
    let (schedule, sets, shrink_trace) = fit_radius_k(sch)?;
    let matching = match_offsets(&sets);
    let (modulus, m0, congruences) = solve_m0_k(&sets, &matching, schedule.x, opts.reduced)?;
    let hit = find_prime_in_ap(&m0, &modulus, opts.max_steps, opts.seed)?;
    let window = verify_power_window(&hit.m, &sets, &matching, opts.seed)?;
    Ok(KCertificate {
        schedule,
        sets,
        matching,
        reduced: opts.reduced,
        congruences,
        modulus,
        m0,
        m: hit.m,
        j: hit.j,
        primality_tests: hit.tests,
        cover: window.cover,
        exceptions: window.exceptions,
        prime_count_in_window: window.prime_count,
        shrink_trace,
        seed: opts.seed,
    })
}
