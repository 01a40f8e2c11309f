//! Segmented sieve of Eratosthenes over odd numbers.

use alloc::vec;
use alloc::vec::Vec;

const SEGMENT_BYTES: usize = 1 << 15;

/// Primes `p <= n` in ascending order.
pub fn primes_upto(n: u64) -> Vec<u64> {
    primes_in_range(0, n)
}

/// Primes `p` with `lo <= p <= hi`, ascending.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    let mut out = Vec::new();
    if hi < 2 || lo > hi {
        return out;
    }
    if lo <= 2 {
        out.push(2);
    }
    if hi < 3 {
        return out;
    }
    let root = isqrt(hi);
    let base = small_odd_primes(root);

    // odd numbers only: index i stands for start + 2i
    let mut start = lo.max(3) | 1;
    let mut seg = vec![true; SEGMENT_BYTES];
    while start <= hi {
        let span = ((hi - start) / 2 + 1).min(SEGMENT_BYTES as u64) as usize;
        let end = start + 2 * (span as u64 - 1);
        seg[..span].iter_mut().for_each(|b| *b = true);
        for &p in &base {
            if p * p > end {
                break;
            }
            let mut first = p * p;
            if first < start {
                first = start.div_ceil(p) * p;
                if first % 2 == 0 {
                    first += p;
                }
            }
            let mut i = ((first - start) / 2) as usize;
            while i < span {
                seg[i] = false;
                i += p as usize;
            }
        }
        out.extend(
            seg[..span]
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| start + 2 * i as u64),
        );
        start = match end.checked_add(2) {
            Some(s) => s,
            None => break,
        };
    }
    out
}

fn small_odd_primes(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    if limit < 3 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    let mut i = 3;
    while i <= limit {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += 2 * i;
            }
        }
        i += 2;
    }
    out
}

/// Floor of the square root.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = libm::sqrt(n as f64) as u64;
    while r.checked_mul(r).is_none_or(|s| s > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= n) {
        r += 1;
    }
    r
}
