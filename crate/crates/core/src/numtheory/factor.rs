//! Trial-division factoring for window offsets and squarefree certification.

use alloc::vec::Vec;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::primality::is_prime;
use super::sieve::isqrt;
use crate::{Error, Result};

/// Offsets larger than this are refused by [`largest_prime_factor`].
pub const FACTOR_LIMIT: u64 = 1_000_000_000_000;

/// Trial-division bound used when certifying squarefreeness.
pub const SQUAREFREE_TRIAL_BOUND: u64 = 10_000_000;

/// Largest prime factor `P+(n)`, with `P+(1) = 1`.
pub fn largest_prime_factor(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(crate::error::domain("largest prime factor of 0 is undefined"));
    }
    if n > FACTOR_LIMIT {
        return Err(Error::TooLargeToFactor { n, limit: FACTOR_LIMIT });
    }
    let mut rest = n;
    let mut largest = 1;
    for d in [2u64, 3] {
        while rest % d == 0 {
            rest /= d;
            largest = d;
        }
    }
    let mut d = 5;
    while d * d <= rest {
        for q in [d, d + 2] {
            while rest % q == 0 {
                rest /= q;
                largest = q;
            }
        }
        d += 6;
    }
    Ok(if rest > 1 { rest } else { largest })
}

/// `P+(n) <= z`; 1 counts as smooth for every `z`.
pub fn is_smooth(n: u64, z: f64) -> Result<bool> {
    if n == 1 {
        return Ok(true);
    }
    Ok(largest_prime_factor(n)? as f64 <= z)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SquarefreeStatus {
    /// Complete factorization settles the question.
    Proven,
    /// No square of a prime `<= bound` divides the number and the cofactor
    /// could not be fully resolved.
    Partial { bound: u64 },
    /// `p^2` divides the number.
    NotSquarefree { p: u64 },
}

impl SquarefreeStatus {
    pub fn is_acceptable(&self) -> bool {
        !matches!(self, SquarefreeStatus::NotSquarefree { .. })
    }
}

/// Tiered squarefree check. `primes` must hold every prime up to `bound` in
/// ascending order (it may hold more).
pub fn squarefree_status(n: &BigUint, primes: &[u64], bound: u64, seed: u64) -> SquarefreeStatus {
    if n.is_zero() {
        return SquarefreeStatus::NotSquarefree { p: 0 };
    }
    let mut rest = n.clone();
    let mut last = 1u64;
    for &p in primes.iter().take_while(|&&p| p <= bound) {
        if let Some(r) = rest.to_u64() {
            if r == 1 || p.checked_mul(p).is_none_or(|pp| pp > r) {
                return SquarefreeStatus::Proven;
            }
        }
        let (q, r) = rest.div_rem(&BigUint::from(p));
        if r.is_zero() {
            if (&q % p).is_zero() {
                return SquarefreeStatus::NotSquarefree { p };
            }
            rest = q;
        }
        last = p;
    }
    if rest.is_one() || is_prime(&rest, seed) {
        return SquarefreeStatus::Proven;
    }
    // rest has no prime factor <= last; below last^3 it is p*q or p^2
    let cube = BigUint::from(last).pow(3);
    if rest < cube {
        let root = rest.sqrt();
        if &root * &root == rest {
            return match root.to_u64() {
                Some(p) => SquarefreeStatus::NotSquarefree { p },
                None => SquarefreeStatus::Partial { bound },
            };
        }
        return SquarefreeStatus::Proven;
    }
    SquarefreeStatus::Partial { bound }
}

/// Distinct prime factors of a machine integer, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut d = 2;
    while d <= isqrt(n) {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}
