//! Brun-sieve upper bound evaluation and brute-force sifted-set counters.
//!
//! The bound evaluated is
//!
//! ```text
//! S(A, P, z) <= X W(z) { 1 + 2 λ^(2b+1) e^(2λ) / (1 - λ² e^(2+2λ)) · exp((2b+3) c / (λ log z)) }
//!               + C_err z^(2b + 2.01 / (e^(2λ/κ) - 1))
//! ```
//!
//! with `W(z) = ∏_{p<z} (1 - ω(p)/p)`. Neither `c` nor `C_err` is pinned
//! down by the underlying theorem, so both are inputs (default 1) and the
//! additive tail is reported on its own line.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::domain;
use crate::numtheory::{pow_mod, primes_upto, reduce};
use crate::Result;

/// `λ e^(1+λ)`, which must lie in `(0, 1)`.
pub fn admissibility(lambda: f64) -> f64 {
    lambda * libm::exp(1.0 + lambda)
}

pub fn is_admissible(lambda: f64) -> bool {
    let a = admissibility(lambda);
    lambda > 0.0 && a > 0.0 && a < 1.0
}

/// `2 λ^(2b+1) e^(2λ) / (1 - λ² e^(2+2λ))`.
pub fn brun_main_factor(lambda: f64, b: u32) -> Result<f64> {
    if !is_admissible(lambda) {
        return Err(domain(alloc::format!(
            "λ = {lambda} violates 0 < λe^(1+λ) < 1 (value {})",
            admissibility(lambda)
        )));
    }
    if b == 0 {
        return Err(domain("b must be a positive integer"));
    }
    let num = 2.0 * libm::pow(lambda, (2 * b + 1) as f64) * libm::exp(2.0 * lambda);
    let den = 1.0 - lambda * lambda * libm::exp(2.0 + 2.0 * lambda);
    Ok(num / den)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SieveInstance {
    /// `|A|`.
    pub size: u64,
    /// `ω(p)` for each sieving prime.
    pub omega: BTreeMap<u64, u64>,
    pub z: f64,
    pub kappa: f64,
    pub a1: f64,
    pub a2: f64,
    pub lambda: f64,
    pub b: u32,
    pub sieve_c: f64,
    pub error_constant: f64,
}

impl SieveInstance {
    fn sieving(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.omega.iter().map(|(&p, &w)| (p, w)).filter(move |&(p, _)| (p as f64) < self.z)
    }

    /// `W(z) = ∏_{p<z} (1 - ω(p)/p)`.
    pub fn w_z(&self) -> f64 {
        self.sieving().map(|(p, w)| 1.0 - w as f64 / p as f64).product()
    }

    /// Smallest `A1` satisfying `ω(p)/p <= 1 - 1/A1`.
    pub fn min_a1(&self) -> f64 {
        self.sieving()
            .map(|(p, w)| {
                let d = 1.0 - w as f64 / p as f64;
                if d > 0.0 { 1.0 / d } else { f64::INFINITY }
            })
            .fold(1.0, f64::max)
    }

    /// `max_w [Σ_{w<=p<z} ω(p) log p / p - κ log(z/w)]` over `w = 2`, each
    /// sieving prime, and `w = z`.
    pub fn condition3_excess(&self) -> f64 {
        let primes: Vec<(u64, u64)> = self.sieving().collect();
        let mut suffix = 0.0;
        let mut worst = 0.0f64;
        // walk w downward through the primes, keeping the tail sum
        for &(p, w) in primes.iter().rev() {
            suffix += w as f64 * libm::log(p as f64) / p as f64;
            worst = worst.max(suffix - self.kappa * libm::log(self.z / p as f64));
        }
        if self.z >= 2.0 {
            worst = worst.max(suffix - self.kappa * libm::log(self.z / 2.0));
        }
        worst
    }

    /// Sets `A1`, `A2` to the smallest admissible values for this `ω`.
    pub fn with_minimal_constants(mut self) -> Self {
        self.a1 = self.min_a1();
        self.a2 = self.condition3_excess().max(1.0);
        self
    }

    /// Checks the hypotheses on the instance itself.
    pub fn validate(&self) -> Result<()> {
        if !(self.kappa > 0.0) || !(self.a1 >= 1.0) || !(self.a2 >= 1.0) {
            return Err(domain("need κ > 0, A1 >= 1, A2 >= 1"));
        }
        if !(self.z > 1.0) {
            return Err(domain(alloc::format!("z = {} must exceed 1", self.z)));
        }
        if !(self.sieve_c > 0.0) {
            return Err(domain("sieve constant must be positive"));
        }
        for (p, w) in self.sieving() {
            if w as f64 / p as f64 > 1.0 - 1.0 / self.a1 + 1e-12 {
                return Err(domain(alloc::format!("ω({p}) = {w} breaks ω(p)/p <= 1 - 1/A1")));
            }
        }
        let excess = self.condition3_excess();
        if excess > self.a2 + 1e-12 {
            return Err(domain(alloc::format!(
                "condition 3 fails: excess {excess} > A2 = {}",
                self.a2
            )));
        }
        brun_main_factor(self.lambda, self.b).map(|_| ())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrunBound {
    pub w_z: f64,
    pub main_factor: f64,
    /// `X W(z) {1 + factor · exp(...)}`.
    pub main_term: f64,
    /// `C_err z^(2b + 2.01/(e^(2λ/κ) - 1))`.
    pub error_budget: f64,
    pub total: f64,
}

pub fn brun_upper_bound(inst: &SieveInstance) -> Result<BrunBound> {
    inst.validate()?;
    let main_factor = brun_main_factor(inst.lambda, inst.b)?;
    let w_z = inst.w_z();
    let log_z = libm::log(inst.z);
    let correction = libm::exp((2 * inst.b + 3) as f64 * inst.sieve_c / (inst.lambda * log_z));
    let main_term = inst.size as f64 * w_z * (1.0 + main_factor * correction);
    let tail_exp =
        2.0 * inst.b as f64 + 2.01 / (libm::exp(2.0 * inst.lambda / inst.kappa) - 1.0);
    let error_budget = inst.error_constant * libm::pow(inst.z, tail_exp);
    Ok(BrunBound { w_z, main_factor, main_term, error_budget, total: main_term + error_budget })
}

/// Number of `n ∈ [1, range]` avoiding every forbidden residue of every
/// prime `p < z`.
pub fn empirical_sifted_count(range: u64, rules: &BTreeMap<u64, Vec<u64>>, z: f64) -> u64 {
    let active: Vec<(u64, Vec<bool>)> = rules
        .iter()
        .filter(|(&p, _)| (p as f64) < z)
        .map(|(&p, rs)| {
            let mut mask = alloc::vec![false; p as usize];
            rs.iter().for_each(|&r| mask[(r % p) as usize] = true);
            (p, mask)
        })
        .collect();
    (1..=range)
        .filter(|&n| active.iter().all(|(p, mask)| !mask[(n % p) as usize]))
        .count() as u64
}

/// Forbidden classes for the `U5` sieve: `{0}` on `P1`, `{0, 1 - 2^k}` on `P2`.
pub fn forbidden_class_rules(p1: &[u64], p2: &[u64], k: u32) -> BTreeMap<u64, Vec<u64>> {
    let mut rules = BTreeMap::new();
    for &p in p1 {
        rules.insert(p, alloc::vec![0]);
    }
    for &p in p2 {
        let shifted = (1 + p - pow_mod(2, k as u64, p)) % p;
        let mut rs = alloc::vec![0, shifted];
        rs.dedup();
        rules.insert(p, rs);
    }
    rules
}

/// `ω(p)` = number of distinct forbidden classes.
pub fn omega_of(rules: &BTreeMap<u64, Vec<u64>>) -> BTreeMap<u64, u64> {
    rules
        .iter()
        .map(|(&p, rs)| {
            let mut v: Vec<u64> = rs.iter().map(|r| r % p).collect();
            v.sort_unstable();
            v.dedup();
            (p, v.len() as u64)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidueAvoidCount {
    pub count: u64,
    /// `(x / log x) ∏_{r ∈ R, r <= x} (1 - 1/r)`.
    pub comparator: f64,
}

impl ResidueAvoidCount {
    pub fn ratio(&self) -> f64 {
        self.count as f64 / self.comparator
    }
}

/// Primes `p <= x` with `p ≢ a (mod r)` for every `r` in `moduli`.
pub fn residue_avoid_prime_count(x: u64, moduli: &[u64], a: i64) -> ResidueAvoidCount {
    let count = primes_upto(x)
        .into_iter()
        .filter(|&p| moduli.iter().all(|&r| p % r != reduce(a, r)))
        .count() as u64;
    let xf = x as f64;
    let product: f64 = moduli
        .iter()
        .filter(|&&r| r <= x)
        .map(|&r| 1.0 - 1.0 / r as f64)
        .product();
    ResidueAvoidCount { count, comparator: xf / libm::log(xf) * product }
}

/// `ρ(p) = #{n mod p : n^k + v - 1 ≡ 0}`.
///
/// For `a = 1 - v ≢ 0` this is `gcd(k, p-1)` when `a` is a k-th power residue
/// (Euler's criterion in the cyclic group) and 0 otherwise; `a ≡ 0` has the
/// single root 0.
pub fn rho(k: u64, v: i64, p: u64) -> u64 {
    let a = reduce(1 - v, p);
    if a == 0 {
        return 1;
    }
    let g = num_integer::gcd(k, p - 1);
    if pow_mod(a, (p - 1) / g, p) == 1 {
        g
    } else {
        0
    }
}

/// `∏_{p_lo < p <= p_hi} (1 - ρ(p)/p)`.
pub fn rho_product(k: u64, v: i64, p_lo: u64, p_hi: u64) -> f64 {
    crate::numtheory::primes_in_range(p_lo.saturating_add(1), p_hi)
        .into_iter()
        .map(|p| 1.0 - rho(k, v, p) as f64 / p as f64)
        .product()
}
