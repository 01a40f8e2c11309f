//! Desk-scale constructions of prime-avoiding numbers.
//!
//! An integer `m` is prime-avoiding with radius `y` when every `m + u`,
//! `|u| <= y`, is composite. This crate builds such `m` in two flavours:
//!
//! - [`squarefree`]: a squarefree `m` whose whole window is covered by small
//!   prime divisors forced through a system of congruences;
//! - [`kpower`]: a prime `m` for which `m^k + u - 1` is composite across the
//!   window, apart from an explicitly listed exceptional set.
//!
//! Every run yields a certificate: for each covered offset a witness prime
//! `p < value` with `p | value`, checkable by one big-integer division.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, the command line
//! and parallel verification live in the `prime-avoid` crate.
#![no_std]

extern crate alloc;

pub mod error;
pub mod kpower;
pub mod numtheory;
pub mod schedule;
pub mod sievebound;
pub mod squarefree;

pub use error::{Error, Result};
pub use num_bigint::BigUint;
pub use numtheory::{Congruence, FactorWitness, Natural};
pub use schedule::{Profile, Schedule, ScheduleOverrides};
