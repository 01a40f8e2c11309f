//! Exact integer and modular arithmetic primitives.

mod crt;
mod factor;
mod mertens;
mod primality;
mod residues;
mod sieve;

pub use crt::{crt_solve, residues_of};
pub use factor::{
    is_smooth, largest_prime_factor, prime_factors, squarefree_status, SquarefreeStatus,
    FACTOR_LIMIT, SQUAREFREE_TRIAL_BOUND,
};
pub use mertens::{mertens_product, mertens_product_dd, DoubleDouble, EULER_GAMMA};
pub use primality::{
    is_prime, is_prime_u64, is_probable_prime_base2, mul_mod, pow_mod, DETERMINISTIC_LIMIT,
    PROBABILISTIC_ROUNDS,
};
pub use residues::{jacobi, kth_roots_mod_p, reduce, smallest_nonzero_roots};
pub use sieve::{isqrt, primes_in_range, primes_upto};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::{Error, Result};

/// Arbitrary-precision non-negative integer.
pub type Natural = BigUint;

/// `n ≡ residue (mod modulus)` with a prime modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Congruence {
    residue: u64,
    modulus: u64,
}

impl Congruence {
    pub fn new(residue: u64, modulus: u64) -> Result<Self> {
        if residue >= modulus || !is_prime_u64(modulus) {
            return Err(Error::InvalidCongruence { residue, modulus });
        }
        Ok(Self { residue, modulus })
    }

    /// Congruence for a signed residue, reduced into `[0, modulus)`.
    pub fn signed(residue: i64, modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidCongruence { residue: 0, modulus });
        }
        Self::new(reduce(residue, modulus), modulus)
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn holds_for(&self, n: &BigUint) -> bool {
        (n % self.modulus).to_u64() == Some(self.residue)
    }
}

/// A prime `p` dividing `n`; when `cofactor_gt_one` holds, `p < n` and `n` is
/// certified composite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorWitness {
    pub n: Natural,
    pub p: u64,
    pub cofactor_gt_one: bool,
}

impl FactorWitness {
    /// Checks `p | n` by division; `None` when it does not divide.
    pub fn check(n: Natural, p: u64) -> Option<Self> {
        if p < 2 || !(&n % p).is_zero() {
            return None;
        }
        let cofactor_gt_one = n > BigUint::from(p);
        Some(Self { n, p, cofactor_gt_one })
    }

    pub fn certifies_composite(&self) -> bool {
        self.cofactor_gt_one
    }
}

/// Natural logarithm of a big integer (n > 0).
pub fn ln_natural(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        if let Some(v) = n.to_f64() {
            return libm::log(v);
        }
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap_or(f64::NAN);
    libm::log(top) + shift as f64 * core::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn congruence_validation() {
        assert!(Congruence::new(3, 7).is_ok());
        assert!(Congruence::new(7, 7).is_err());
        assert!(Congruence::new(1, 9).is_err());
        assert_eq!(Congruence::signed(-5, 11).unwrap().residue(), 6);
        assert!(Congruence::new(2, 5).unwrap().holds_for(&BigUint::from(22u32)));
    }

    #[test]
    fn factor_witness() {
        let w = FactorWitness::check(BigUint::from(91u32), 7).unwrap();
        assert!(w.certifies_composite());
        assert!(FactorWitness::check(BigUint::from(91u32), 5).is_none());
        let w = FactorWitness::check(BigUint::from(7u32), 7).unwrap();
        assert!(!w.certifies_composite());
    }

    #[test]
    fn big_logs() {
        let n = BigUint::one() << 5000u32;
        assert!((ln_natural(&n) - 5000.0 * core::f64::consts::LN_2).abs() < 1e-9);
        assert!((ln_natural(&BigUint::from(1000u32)) - libm::log(1000.0)).abs() < 1e-12);
    }
}
