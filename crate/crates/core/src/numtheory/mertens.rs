//! Mertens' product `∏_{p<=w} (1 - 1/p)` in double-double arithmetic.

use core::ops::{Mul, Sub};

use super::sieve::primes_upto;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Unevaluated sum `hi + lo` carrying about 106 significand bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

impl DoubleDouble {
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    pub fn from_f64(v: f64) -> Self {
        Self { hi: v, lo: 0.0 }
    }

    fn two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        let bb = s - a;
        let err = (a - (s - bb)) + (b - bb);
        Self { hi: s, lo: err }
    }

    fn quick_two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        Self { hi: s, lo: b - (s - a) }
    }

    fn two_prod(a: f64, b: f64) -> Self {
        let p = a * b;
        Self { hi: p, lo: libm::fma(a, b, -p) }
    }

    /// `self / d` for a machine integer divisor.
    pub fn div_u64(self, d: u64) -> Self {
        let d = d as f64;
        let q1 = self.hi / d;
        let r = self - Self::two_prod(q1, d);
        let q2 = r.hi / d;
        let r = r - Self::two_prod(q2, d);
        let q3 = r.hi / d;
        let q = Self::quick_two_sum(q1, q2);
        Self::two_sum(q.hi, q.lo + q3)
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

impl Mul for DoubleDouble {
    type Output = Self;

    fn mul(self, other: Self) -> Self {
        let p = Self::two_prod(self.hi, other.hi);
        let lo = p.lo + (self.hi * other.lo + self.lo * other.hi);
        Self::quick_two_sum(p.hi, lo)
    }
}

impl Sub for DoubleDouble {
    type Output = Self;

    fn sub(self, other: Self) -> Self {
        let s = Self::two_sum(self.hi, -other.hi);
        let lo = s.lo + (self.lo - other.lo);
        Self::quick_two_sum(s.hi, lo)
    }
}

/// `∏_{p <= w} (1 - 1/p)`.
pub fn mertens_product(w: u64) -> f64 {
    mertens_product_dd(w).to_f64()
}

pub fn mertens_product_dd(w: u64) -> DoubleDouble {
    primes_upto(w).into_iter().fold(DoubleDouble::ONE, |acc, p| {
        let factor = DoubleDouble::from_f64((p - 1) as f64).div_u64(p);
        acc * factor
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_products() {
        assert!((mertens_product(10) - 48.0 / 210.0).abs() < 1e-16);
        assert_eq!(mertens_product(2), 0.5);
        assert_eq!(mertens_product(1), 1.0);
    }

    #[test]
    fn division_is_exactish() {
        let third = DoubleDouble::ONE.div_u64(3);
        let back = third * DoubleDouble::from_f64(3.0);
        assert!((back.hi - 1.0).abs() + back.lo.abs() < 1e-30);
    }

    #[test]
    fn product_of_many_primes_matches_exact_rational() {
        // ∏_{p<=30} (p-1)/p = 1658880 / 6469693230 (numerator and primorial)
        let num: u64 = [1u64, 2, 4, 6, 10, 12, 16, 18, 22, 28].iter().product();
        let den: u64 = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29].iter().product();
        let exact = DoubleDouble::from_f64(num as f64).div_u64(den);
        let got = mertens_product_dd(30);
        assert!((got.hi - exact.hi).abs() <= f64::EPSILON * exact.hi);
        assert!(((got.hi - exact.hi) + (got.lo - exact.lo)).abs() < 1e-28);
    }

    #[test]
    fn mertens_theorem_window() {
        for w in [1_000u64, 10_000, 100_000] {
            let lw = libm::log(w as f64);
            let scaled = mertens_product(w) * lw * libm::exp(EULER_GAMMA);
            assert!((scaled - 1.0).abs() <= 3.0 / lw, "w={w} scaled={scaled}");
        }
    }
}
