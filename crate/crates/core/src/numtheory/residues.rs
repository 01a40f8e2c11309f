//! Jacobi symbols and k-th roots modulo small primes.

use alloc::vec;
use alloc::vec::Vec;

use super::primality::pow_mod;
use crate::Result;

/// Jacobi symbol `(a / n)` for odd positive `n`.
pub fn jacobi(a: i64, n: u64) -> Result<i8> {
    if n == 0 || n % 2 == 0 {
        return Err(crate::error::domain(alloc::format!(
            "Jacobi symbol needs an odd positive modulus, got {n}"
        )));
    }
    let mut a = reduce(a, n);
    let mut n = n;
    let mut sign = 1i8;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz % 2 == 1 && matches!(n % 8, 3 | 5) {
            sign = -sign;
        }
        // reciprocity
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        core::mem::swap(&mut a, &mut n);
        a %= n;
    }
    Ok(if n == 1 { sign } else { 0 })
}

/// Least non-negative residue of a signed integer.
pub fn reduce(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

/// All `n mod p` with `n^k ≡ a (mod p)`, ascending, found by enumerating
/// every residue.
pub fn kth_roots_mod_p(a: i64, k: u64, p: u64) -> Vec<u64> {
    let target = reduce(a, p);
    (0..p).filter(|&n| pow_mod(n, k, p) == target).collect()
}

/// `table[r]` is the smallest non-zero `n` with `n^k ≡ r (mod p)`, or 0 when
/// `r` has no non-zero k-th root. Entry 0 is always 0.
pub fn smallest_nonzero_roots(k: u64, p: u64) -> Vec<u64> {
    let mut table = vec![0u64; p as usize];
    for n in (1..p).rev() {
        table[pow_mod(n, k, p) as usize] = n;
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::primes_upto;

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi(2, 7), Ok(1));
        assert_eq!(jacobi(3, 7), Ok(-1));
        assert_eq!(jacobi(0, 5), Ok(0));
        assert_eq!(jacobi(-1, 7), Ok(-1));
        assert_eq!(jacobi(-1, 5), Ok(1));
        assert_eq!(jacobi(5, 1), Ok(1));
        assert_eq!(jacobi(2, 15), Ok(1));
        assert_eq!(jacobi(7, 15), Ok(-1));
        assert!(jacobi(3, 8).is_err());
        assert!(jacobi(3, 0).is_err());
    }

    #[test]
    fn jacobi_matches_euler_and_squares() {
        for p in primes_upto(500).into_iter().skip(1) {
            let squares: Vec<bool> = {
                let mut s = vec![false; p as usize];
                (1..p).for_each(|n| s[(n * n % p) as usize] = true);
                s
            };
            for a in 1..p {
                let j = jacobi(a as i64, p).unwrap();
                assert_eq!(j == 1, squares[a as usize], "({a}/{p})");
                let e = pow_mod(a, (p - 1) / 2, p);
                assert_eq!(if j == 1 { 1 } else { p - 1 }, e);
            }
        }
    }

    #[test]
    fn root_examples() {
        assert_eq!(kth_roots_mod_p(2, 2, 7), vec![3, 4]);
        assert_eq!(kth_roots_mod_p(0, 5, 11), vec![0]);
        assert!(kth_roots_mod_p(3, 2, 7).is_empty());
        assert_eq!(kth_roots_mod_p(-1, 2, 13), vec![5, 8]);
    }

    #[test]
    fn smallest_root_table() {
        let t = smallest_nonzero_roots(2, 7);
        assert_eq!(t, vec![0, 1, 3, 0, 2, 0, 0]);
    }
}
