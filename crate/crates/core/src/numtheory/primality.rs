//! Miller–Rabin primality testing.
//!
//! Below [`DETERMINISTIC_LIMIT`] the first thirteen primes form a complete
//! witness set (the smallest strong pseudoprime to all of them is
//! 3317044064679887385961981), so the answer is exact. Above it the test runs 64 rounds with
//! bases drawn from a ChaCha stream keyed by the caller's seed.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Inputs below this bound are decided exactly.
pub const DETERMINISTIC_LIMIT: u128 = 3_300_000_000_000_000_000_000_000;

/// Number of random-base rounds above [`DETERMINISTIC_LIMIT`].
pub const PROBABILISTIC_ROUNDS: usize = 64;

const WITNESSES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

const TRIAL_PRIMES: [u64; 54] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193,
    197, 199, 211, 223, 227, 229, 233, 239, 241, 251,
];

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Exact primality for machine integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &TRIAL_PRIMES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    if n < 251 * 251 {
        return true;
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    WITNESSES.iter().all(|&a| strong_probable_prime_u64(n, a, d, s))
}

fn strong_probable_prime_u64(n: u64, a: u64, d: u64, s: u32) -> bool {
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Primality of an arbitrary natural number; `seed` only matters above
/// [`DETERMINISTIC_LIMIT`].
pub fn is_prime(n: &BigUint, seed: u64) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if !passes_trial_division(n) {
        return false;
    }
    let n_minus_one = n - 1u32;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    let sprp = |a: &BigUint| strong_probable_prime(n, a, &d, s, &n_minus_one);

    if n.to_u128().is_some_and(|v| v < DETERMINISTIC_LIMIT) {
        return WITNESSES.iter().all(|&a| sprp(&BigUint::from(a)));
    }
    if !sprp(&BigUint::from(2u32)) {
        return false;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span = n - 3u32;
    (0..PROBABILISTIC_ROUNDS).all(|_| {
        let a = random_below(&mut rng, &span) + 2u32;
        sprp(&a)
    })
}

/// One strong-probable-prime round with base 2, after small trial division.
/// Cheap filter for scanning progressions; callers confirm with [`is_prime`].
pub fn is_probable_prime_base2(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if !passes_trial_division(n) {
        return false;
    }
    let n_minus_one = n - 1u32;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    strong_probable_prime(n, &BigUint::from(2u32), &d, s, &n_minus_one)
}

fn passes_trial_division(n: &BigUint) -> bool {
    TRIAL_PRIMES
        .iter()
        .all(|&p| !(n % p).is_zero() || *n == BigUint::from(p))
}

fn strong_probable_prime(
    n: &BigUint,
    a: &BigUint,
    d: &BigUint,
    s: u64,
    n_minus_one: &BigUint,
) -> bool {
    let mut x = a.modpow(d, n);
    if x.is_one() || x == *n_minus_one {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == *n_minus_one {
            return true;
        }
        if x.is_one() {
            return false;
        }
    }
    false
}

fn random_below(rng: &mut ChaCha8Rng, bound: &BigUint) -> BigUint {
    // 64 extra bits keep the modular bias negligible
    let bytes = (bound.bits() as usize).div_ceil(8) + 8;
    let mut buf = alloc::vec![0u8; bytes];
    rng.fill_bytes(&mut buf);
    BigUint::from_bytes_le(&buf).mod_floor(bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn named_cases() {
        assert!(!is_prime(&BigUint::from(561u32), 0));
        assert!(is_prime(&BigUint::from(2u32), 0));
        assert!(is_prime(&BigUint::from(1_000_000_007u64), 0));
        assert!(!is_prime(&BigUint::from(0u32), 0));
        assert!(!is_prime(&BigUint::from(1u32), 0));
    }

    #[test]
    fn agrees_with_trial_division_below_20000() {
        for n in 0..20_000u64 {
            assert_eq!(is_prime_u64(n), trial(n), "{n}");
        }
    }

    #[test]
    fn strong_pseudoprimes_to_many_bases() {
        // psi_11: strong pseudoprime to the first 11 prime bases
        assert!(!is_prime_u64(3_825_123_056_546_413_051));
        // product of the two largest primes below 2^32
        assert!(!is_prime_u64(4_294_967_291 * 4_294_967_279));
        assert!(is_prime_u64(18_446_744_073_709_551_557));
    }

    #[test]
    fn big_range() {
        // 2^89 - 1 is a Mersenne prime, above the deterministic limit
        let m89 = (BigUint::one() << 89u32) - 1u32;
        assert!(is_prime(&m89, 7));
        assert!(is_prime(&m89, 8));
        // 2^83 - 1 = 167 * ...
        let m83 = (BigUint::one() << 83u32) - 1u32;
        assert!(!is_prime(&m83, 7));
        // strong pseudoprime to every prime base up to 37
        let psi12: BigUint = "318665857834031151167461".parse().unwrap();
        assert!(!is_prime(&psi12, 0));
        // strong pseudoprime to every prime base up to 41; just above the exact range
        let psi13: BigUint = "3317044064679887385961981".parse().unwrap();
        assert!(psi13.to_u128().unwrap() >= DETERMINISTIC_LIMIT);
        assert!(!is_prime(&psi13, 0));
        // 2^61 - 1 squared plus a prime factor check via u128 range
        let p = BigUint::from(2_305_843_009_213_693_951u64);
        assert!(!is_prime(&(&p * &p), 1));
    }

    #[test]
    fn seeded_rounds_are_deterministic() {
        let m127 = (BigUint::one() << 127u32) - 1u32;
        assert_eq!(is_prime(&m127, 42), is_prime(&m127, 42));
        assert!(is_prime(&m127, 42));
        assert!(is_probable_prime_base2(&m127));
    }
}
