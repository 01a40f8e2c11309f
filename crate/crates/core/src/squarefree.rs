//! Prime-avoiding squarefree numbers.
//!
//! The window `[-y, y]` is split by which congruence will cover each offset:
//!
//! - `U1`: offsets divisible by a prime of `P1`; forcing `m ≡ 0 (mod p)` on
//!   `P1` makes `p | m + u`;
//! - `U3 \ U5`: prime offsets with some `p ∈ P2` dividing `u + 1`; forcing
//!   `m ≡ 1 (mod p)` on `P2` makes `p | m + u`;
//! - `U6 = U4 ∪ U5 ∪ {-1, 0, 1}`: everything else, each given a private prime
//!   `p_u ∈ P3` with `m ≡ -u (mod p_u)`.
//!
//! A squarefree member of the resulting progression `m0 + jN` is then
//! searched for, and every window element is certified by a witness prime.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::numtheory::{
    crt_solve, is_smooth, is_prime_u64, ln_natural, primes_upto, squarefree_status, Congruence,
    FactorWitness, SquarefreeStatus, SQUAREFREE_TRIAL_BOUND,
};
use crate::schedule::{capacity_check, iter_log, CapacityVerdict, Schedule, SetSizes};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SetSystem {
    pub y: u64,
    pub p1: Vec<u64>,
    pub p2: Vec<u64>,
    pub p3: Vec<u64>,
    pub u1: Vec<i64>,
    pub u2: Vec<i64>,
    pub u3: Vec<i64>,
    pub u4: Vec<i64>,
    pub u5: Vec<i64>,
    pub u6: Vec<i64>,
}

impl SetSystem {
    pub fn window(&self) -> impl Iterator<Item = i64> {
        let y = self.y as i64;
        -y..=y
    }
}

/// Window offsets as a signed range.
pub(crate) fn signed_window(y: u64) -> core::ops::RangeInclusive<i64> {
    -(y as i64)..=(y as i64)
}

pub fn build_sets(sch: &Schedule) -> Result<SetSystem> {
    if sch.degenerate {
        return Err(Error::DegenerateSchedule { z: sch.z, log_x: sch.log_x() });
    }
    let log_x = sch.log_x();
    let quarter = sch.x / 4.0;
    let primes = primes_upto(libm::floor(sch.x) as u64);
    let mut sets = SetSystem { y: sch.y, ..Default::default() };
    for &p in &primes {
        let pf = p as f64;
        if pf <= log_x || (sch.z < pf && pf <= quarter) {
            sets.p1.push(p);
        } else if pf <= sch.z {
            sets.p2.push(p);
        } else {
            sets.p3.push(p);
        }
    }

    for u in signed_window(sch.y) {
        let a = u.unsigned_abs();
        if sets.p1.iter().any(|&p| a % p == 0) {
            sets.u1.push(u);
            continue;
        }
        if a <= 1 {
            continue;
        }
        sets.u2.push(u);
        let prime = is_prime_u64(a);
        if prime {
            sets.u3.push(u);
            if sets.p2.iter().all(|&p| (u + 1).rem_euclid(p as i64) != 0) {
                sets.u5.push(u);
            }
        }
        // no factor <= log x survives U1, so z-smooth means composed of P2
        if is_smooth(a, sch.z)? {
            sets.u4.push(u);
        }
    }
    sets.u6 = merge_sorted(&[&sets.u4, &sets.u5, &[-1, 0, 1]]);
    Ok(sets)
}

pub(crate) fn merge_sorted(parts: &[&[i64]]) -> Vec<i64> {
    let mut out: Vec<i64> = parts.iter().flat_map(|p| p.iter().copied()).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// `U2 = U3 ∪ U4` as exact set equality.
pub fn check_partition(sets: &SetSystem) -> bool {
    sets.u2 == merge_sorted(&[&sets.u3, &sets.u4])
}

/// Injective `u ↦ p_u` from `U6` into `P3`, pairing both in ascending order.
pub fn assign_primes(sets: &SetSystem) -> Result<BTreeMap<i64, u64>> {
    if sets.u6.len() > sets.p3.len() {
        return Err(Error::Capacity { needed: sets.u6.len(), available: sets.p3.len() });
    }
    Ok(sets.u6.iter().copied().zip(sets.p3.iter().copied()).collect())
}

/// The defining congruences: `0` on `P1`, `1` on `P2`, `-u` modulo `p_u`.
pub fn congruences(sets: &SetSystem, phi: &BTreeMap<i64, u64>) -> Result<Vec<Congruence>> {
    let mut out = Vec::with_capacity(sets.p1.len() + sets.p2.len() + phi.len());
    for &p in &sets.p1 {
        out.push(Congruence::new(0, p)?);
    }
    for &p in &sets.p2 {
        out.push(Congruence::new(1 % p, p)?);
    }
    for (&u, &p) in phi {
        out.push(Congruence::signed(-u, p)?);
    }
    Ok(out)
}

/// Solves the system, returning `(N, m0)` with `1 <= m0 <= N`.
pub fn solve_m0(sets: &SetSystem, phi: &BTreeMap<i64, u64>) -> Result<(BigUint, BigUint)> {
    let (m0, n) = crt_solve(&congruences(sets, phi)?)?;
    let m0 = if m0.is_zero() { n.clone() } else { m0 };
    Ok((n, m0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub max_steps: u64,
    pub trial_bound: u64,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { max_steps: 100_000, trial_bound: SQUAREFREE_TRIAL_BOUND, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SquarefreeHit {
    pub m: BigUint,
    /// Progression index: `m = m0 + j N`.
    pub j: u64,
    pub status: SquarefreeStatus,
    /// Candidates rejected because a square divides them.
    pub skipped: u64,
    /// `log m / log N`.
    pub exponent_report: f64,
}

/// First `m = m0 + jN >= 2y` that is squarefree as far as trial division to
/// `opts.trial_bound` plus a primality test of the cofactor can tell.
pub fn find_squarefree_in_ap(
    m0: &BigUint,
    n: &BigUint,
    y: u64,
    opts: &SearchOptions,
) -> Result<SquarefreeHit> {
    if opts.max_steps == 0 {
        return Err(crate::error::domain("max_steps must be at least 1"));
    }
    if n.is_zero() {
        return Err(crate::error::domain("modulus must be positive"));
    }
    let floor = BigUint::from(2 * y);
    let j0 = if *m0 >= floor {
        0
    } else {
        (&floor - m0).div_ceil(n).to_u64().unwrap_or(u64::MAX)
    };
    let primes = primes_upto(opts.trial_bound);
    let log_n = ln_natural(n);
    let mut m = m0 + n * j0;
    for step in 0..opts.max_steps {
        let status = squarefree_status(&m, &primes, opts.trial_bound, opts.seed);
        if status.is_acceptable() {
            let exponent_report = if log_n > 0.0 { ln_natural(&m) / log_n } else { f64::NAN };
            return Ok(SquarefreeHit { m, j: j0 + step, status, skipped: step, exponent_report });
        }
        m += n;
    }
    Err(Error::SearchExhausted { steps: opts.max_steps, tests: opts.max_steps })
}

/// `m + u` for a signed offset; `None` when negative.
pub fn shifted(m: &BigUint, u: i64) -> Option<BigUint> {
    if u >= 0 {
        Some(m + u.unsigned_abs())
    } else {
        let d = BigUint::from(u.unsigned_abs());
        (*m >= d).then(|| m - d)
    }
}

/// Witness primes for every offset of the window around `m`.
pub fn verify_window(
    m: &BigUint,
    sets: &SetSystem,
    phi: &BTreeMap<i64, u64>,
) -> Result<Vec<(i64, FactorWitness)>> {
    let mut cover = Vec::with_capacity(2 * sets.y as usize + 1);
    for u in sets.window() {
        let value = shifted(m, u).ok_or(Error::Uncovered { u })?;
        let a = u.unsigned_abs();
        let candidate = phi
            .get(&u)
            .copied()
            .or_else(|| sets.p1.iter().copied().find(|&p| a % p == 0))
            .or_else(|| sets.p2.iter().copied().find(|&p| (u + 1).rem_euclid(p as i64) == 0));
        let witness = candidate
            .and_then(|p| FactorWitness::check(value, p))
            .filter(FactorWitness::certifies_composite)
            .ok_or(Error::Uncovered { u })?;
        cover.push((u, witness));
    }
    Ok(cover)
}

/// `y (log3 m)^2 / (log m log2 m log4 m)` from `log m`.
pub fn avoidance_constant_from_log(log_m: f64, y: u64) -> Result<f64> {
    let l2 = iter_log(log_m, 1)?;
    let l3 = iter_log(log_m, 2)?;
    let l4 = iter_log(log_m, 3)?;
    if !(l4 > 0.0) {
        return Err(crate::error::domain(alloc::format!(
            "log4 m = {l4} <= 0; m must exceed e^(e^e)"
        )));
    }
    Ok(y as f64 * l3 * l3 / (log_m * l2 * l4))
}

pub fn avoidance_constant(m: &BigUint, y: u64) -> Result<f64> {
    if m.is_zero() {
        return Err(crate::error::domain("m must be positive"));
    }
    avoidance_constant_from_log(ln_natural(m), y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShrinkStep {
    pub y: u64,
    pub needed: usize,
    pub available: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AvoidanceCertificate {
    pub schedule: Schedule,
    pub sets: SetSystem,
    pub phi: BTreeMap<i64, u64>,
    pub congruences: Vec<Congruence>,
    pub modulus: BigUint,
    pub m0: BigUint,
    pub m: BigUint,
    pub j: u64,
    pub cover: Vec<(i64, FactorWitness)>,
    pub squarefree_status: SquarefreeStatus,
    pub exponent_report: f64,
    pub avoidance_constant: Option<f64>,
    pub shrink_trace: Vec<ShrinkStep>,
    pub seed: u64,
}

/// Sets for the largest radius (halving from `sch.y`) that passes the
/// capacity check.
pub fn fit_radius(sch: &Schedule) -> Result<(Schedule, SetSystem, Vec<ShrinkStep>)> {
    let mut sch = *sch;
    let mut trace = Vec::new();
    loop {
        let sets = build_sets(&sch)?;
        let sizes = SetSizes { needed: sets.u6.len(), available: sets.p3.len() };
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

/// Full squarefree pipeline.
pub fn construct(sch: &Schedule, opts: &SearchOptions) -> Result<AvoidanceCertificate> {
    let (schedule, sets, shrink_trace) = fit_radius(sch)?;
    let phi = assign_primes(&sets)?;
    let congruences = congruences(&sets, &phi)?;
    let (modulus, m0) = solve_m0(&sets, &phi)?;
    let hit = find_squarefree_in_ap(&m0, &modulus, schedule.y, opts)?;
    let cover = verify_window(&hit.m, &sets, &phi)?;
    let avoidance_constant = avoidance_constant(&hit.m, schedule.y).ok();
    Ok(AvoidanceCertificate {
        schedule,
        sets,
        phi,
        congruences,
        modulus,
        m0,
        m: hit.m,
        j: hit.j,
        cover,
        squarefree_status: hit.status,
        exponent_report: hit.exponent_report,
        avoidance_constant,
        shrink_trace,
        seed: opts.seed,
    })
}
