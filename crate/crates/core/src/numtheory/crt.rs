//! Chinese remainder solver over distinct prime moduli.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::primality::pow_mod;
use super::Congruence;
use crate::{Error, Result};

/// Solve `m0 ≡ r_i (mod p_i)` for pairwise distinct primes `p_i`.
///
/// Returns `(m0, N)` with `N = ∏ p_i` and `0 <= m0 < N`. Uses Garner's mixed
/// radix form, so each step only needs an inverse modulo one small prime.
pub fn crt_solve(congruences: &[Congruence]) -> Result<(BigUint, BigUint)> {
    let mut seen = BTreeSet::new();
    for c in congruences {
        if !seen.insert(c.modulus()) {
            return Err(Error::DuplicateModulus(c.modulus()));
        }
    }
    let mut m0 = BigUint::zero();
    let mut modulus = BigUint::one();
    for c in congruences {
        let p = c.modulus();
        let current = (&m0 % p).to_u64().unwrap_or(0);
        let step = (&modulus % p).to_u64().unwrap_or(0);
        // step is a product of other primes, hence invertible mod p
        let inv = pow_mod(step, p - 2, p);
        let delta = (c.residue() + p - current) % p;
        let t = (delta as u128 * inv as u128 % p as u128) as u64;
        m0 += &modulus * t;
        modulus *= p;
    }
    Ok((m0, modulus))
}

/// Residues of `n` modulo each prime, in order.
pub fn residues_of(n: &BigUint, moduli: &[u64]) -> Vec<u64> {
    moduli.iter().map(|&p| (n % p).to_u64().unwrap_or(0)).collect()
}
