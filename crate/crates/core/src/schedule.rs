//! Parameter schedules `z(x)` and `y(x)` for a construction run.
//!
//! The literal schedule uses
//! `z = x^(c1 log3 x / log2 x)` and `y = c2 x log x log3 x / (log2 x)^2`.
//! For every `x` reachable on a desk the literal `z` drops below `log x`,
//! leaving no primes between the two cutoffs, so the practical profile
//! substitutes `z = sqrt(x)` and keeps the same `y`.

use core::fmt;

use crate::error::domain;
use crate::{Error, Result};

pub const DEFAULT_C1: f64 = 0.1;
pub const DEFAULT_C2: f64 = 0.25;
pub const DEFAULT_DELTA: f64 = 0.01;
/// Auto-shrink never goes below this radius.
pub const MIN_RADIUS: u64 = 3;

/// `j`-fold natural logarithm, `1 <= j <= 4`.
pub fn iter_log(x: f64, j: u32) -> Result<f64> {
    if !(1..=4).contains(&j) {
        return Err(domain(alloc::format!("iterated log depth {j} outside 1..=4")));
    }
    let mut v = x;
    for level in 1..=j {
        if !(v > 0.0) {
            return Err(Error::LogDomain { level, value: v });
        }
        v = libm::log(v);
    }
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Profile {
    Literal,
    Practical,
    Explicit,
}

impl Profile {
    pub fn as_str(&self) -> &'static str {
        match self {
            Profile::Literal => "literal",
            Profile::Practical => "practical",
            Profile::Explicit => "explicit",
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(Profile::Literal),
            "practical" => Ok(Profile::Practical),
            "explicit" => Ok(Profile::Explicit),
            other => Err(domain(alloc::format!("unknown profile {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ScheduleOverrides {
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub z: Option<f64>,
    pub y: Option<u64>,
    pub delta: Option<f64>,
    pub autoshrink: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    pub x: f64,
    pub k: u32,
    pub c1: f64,
    pub c2: f64,
    pub z: f64,
    pub y: u64,
    pub profile: Profile,
    pub delta: f64,
    pub c2_autoshrink: bool,
    /// `z <= log x`: the middle prime class is empty.
    pub degenerate: bool,
}

impl Schedule {
    pub fn log_x(&self) -> f64 {
        libm::log(self.x)
    }

    pub fn with_radius(&self, y: u64) -> Self {
        Self { y, ..*self }
    }
}

/// `c2 x log x log3 x / (log2 x)^2`, unrounded.
pub fn radius_formula(x: f64, c2: f64) -> Result<f64> {
    let l1 = iter_log(x, 1)?;
    let l2 = iter_log(x, 2)?;
    let l3 = iter_log(x, 3)?;
    Ok(c2 * x * l1 * l3 / (l2 * l2))
}

/// `x^(c1 log3 x / log2 x)`.
pub fn literal_z(x: f64, c1: f64) -> Result<f64> {
    let l2 = iter_log(x, 2)?;
    let l3 = iter_log(x, 3)?;
    Ok(libm::exp(iter_log(x, 1)? * c1 * l3 / l2))
}

pub fn make_schedule(x: f64, k: u32, profile: Profile, o: ScheduleOverrides) -> Result<Schedule> {
    if !(x >= 16.0) || !x.is_finite() {
        return Err(domain(alloc::format!("x must be a finite real >= 16, got {x}")));
    }
    if k == 0 {
        return Err(domain("k must be at least 1"));
    }
    let c1 = o.c1.unwrap_or(DEFAULT_C1);
    let c2 = o.c2.unwrap_or(DEFAULT_C2);
    let delta = o.delta.unwrap_or(DEFAULT_DELTA);
    for (name, v) in [("c1", c1), ("c2", c2), ("delta", delta)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(domain(alloc::format!("{name} must be positive, got {v}")));
        }
    }
    let z = match (profile, o.z) {
        (Profile::Literal, None) => literal_z(x, c1)?,
        (Profile::Practical, None) => libm::sqrt(x),
        (Profile::Explicit, Some(z)) => z,
        (Profile::Explicit, None) => return Err(domain("explicit profile needs z")),
        (_, Some(_)) => return Err(domain("z can only be pinned in the explicit profile")),
    };
    if !(z > 0.0) || z > x / 4.0 {
        return Err(domain(alloc::format!("z = {z} outside (0, x/4]")));
    }
    let y = match o.y {
        Some(y) if y < MIN_RADIUS => {
            return Err(domain(alloc::format!("radius y = {y} below {MIN_RADIUS}")))
        }
        Some(y) => y,
        None => {
            let y = libm::floor(radius_formula(x, c2)?);
            if y < MIN_RADIUS as f64 {
                return Err(domain(alloc::format!(
                    "radius formula gives y = {y} < {MIN_RADIUS} at x = {x}; raise x or c2"
                )));
            }
            y as u64
        }
    };
    Ok(Schedule {
        x,
        k,
        c1,
        c2,
        z,
        y,
        profile,
        delta,
        c2_autoshrink: o.autoshrink.unwrap_or(true),
        degenerate: z <= libm::log(x),
    })
}

/// Cardinalities entering the injectivity requirement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SetSizes {
    /// Offsets needing a dedicated prime.
    pub needed: usize,
    /// Primes available for them.
    pub available: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapacityVerdict {
    Ok,
    ShrinkSuggested { new_y: u64 },
    Fail { needed: usize, available: usize },
}

pub fn capacity_check(sch: &Schedule, sizes: SetSizes) -> CapacityVerdict {
    if sizes.needed <= sizes.available {
        return CapacityVerdict::Ok;
    }
    if sch.c2_autoshrink && sch.y > MIN_RADIUS {
        return CapacityVerdict::ShrinkSuggested { new_y: (sch.y / 2).max(MIN_RADIUS) };
    }
    CapacityVerdict::Fail { needed: sizes.needed, available: sizes.available }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iter_log_values() {
        assert!((iter_log(1000.0, 2).unwrap() - 1.932_644_733_916_065_5).abs() < 1e-12);
        assert!((iter_log(core::f64::consts::E, 1).unwrap() - 1.0).abs() < 1e-15);
        assert!((iter_log(1000.0, 3).unwrap() - 0.658_889_393_327_532).abs() < 1e-12);
        assert_eq!(
            iter_log(2.0, 3),
            Err(Error::LogDomain { level: 3, value: libm::log(libm::log(2.0)) })
        );
        assert!(matches!(iter_log(1.0, 3), Err(Error::LogDomain { level: 2, .. })));
        assert!(matches!(iter_log(-1.0, 1), Err(Error::LogDomain { level: 1, .. })));
    }

    #[test]
    fn iter_log_composes() {
        for x in [20.0, 100.0, 1e4, 1e9] {
            for j in 2..=3 {
                let a = iter_log(x, j).unwrap();
                let b = iter_log(iter_log(x, 1).unwrap(), j - 1).unwrap();
                assert!((a - b).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn literal_schedule_is_degenerate_at_desk_scale() {
        let s = make_schedule(1e6, 1, Profile::Literal, ScheduleOverrides::default()).unwrap();
        assert!((s.z - 1.661_851_891_933_714).abs() < 1e-9);
        assert!(s.degenerate);
        let cap = libm::pow(1e6, iter_log(1e6, 3).unwrap() / (10.0 * iter_log(1e6, 2).unwrap()));
        assert!(s.z <= cap * (1.0 + 1e-15));
    }

    #[test]
    fn practical_and_explicit() {
        let s = make_schedule(40.0, 1, Profile::Practical, ScheduleOverrides::default()).unwrap();
        assert!((s.z - 6.324_555_320_336_759).abs() < 1e-12);
        assert_eq!(s.y, 5);
        let o = ScheduleOverrides { z: Some(libm::sqrt(40.0)), y: Some(10), ..Default::default() };
        let s = make_schedule(40.0, 1, Profile::Explicit, o).unwrap();
        assert_eq!(s.y, 10);
        assert!(!s.degenerate);
        let bad = ScheduleOverrides { y: Some(2), ..Default::default() };
        assert!(make_schedule(40.0, 1, Profile::Practical, bad).is_err());
        assert!(make_schedule(40.0, 1, Profile::Explicit, ScheduleOverrides::default()).is_err());
        assert!(make_schedule(10.0, 1, Profile::Practical, ScheduleOverrides::default()).is_err());
    }

    #[test]
    fn radius_values() {
        for (x, y) in [(60.0, 10), (100.0, 20), (150.0, 34), (200.0, 48), (1e3, 304), (1e4, 3725)] {
            let s = make_schedule(x, 1, Profile::Practical, ScheduleOverrides::default()).unwrap();
            assert_eq!(s.y, y, "x = {x}");
        }
    }

    #[test]
    fn deterministic() {
        let a = make_schedule(12345.6, 2, Profile::Literal, ScheduleOverrides::default());
        let b = make_schedule(12345.6, 2, Profile::Literal, ScheduleOverrides::default());
        assert_eq!(a, b);
        assert_eq!(a.unwrap().z.to_bits(), b.unwrap().z.to_bits());
    }

    #[test]
    fn capacity_verdicts() {
        let o = ScheduleOverrides { z: Some(libm::sqrt(40.0)), y: Some(10), ..Default::default() };
        let s = make_schedule(40.0, 1, Profile::Explicit, o).unwrap();
        assert_eq!(capacity_check(&s, SetSizes { needed: 5, available: 8 }), CapacityVerdict::Ok);
        let s23 = s.with_radius(23);
        assert_eq!(
            capacity_check(&s23, SetSizes { needed: 13, available: 8 }),
            CapacityVerdict::ShrinkSuggested { new_y: 11 }
        );
        assert_eq!(capacity_check(&s, SetSizes { needed: 0, available: 0 }), CapacityVerdict::Ok);
        let fixed = Schedule { c2_autoshrink: false, ..s23 };
        assert_eq!(
            capacity_check(&fixed, SetSizes { needed: 13, available: 8 }),
            CapacityVerdict::Fail { needed: 13, available: 8 }
        );
        let floor = s.with_radius(3);
        assert!(matches!(
            capacity_check(&floor, SetSizes { needed: 9, available: 8 }),
            CapacityVerdict::Fail { .. }
        ));
        assert_eq!(
            capacity_check(&s.with_radius(5), SetSizes { needed: 9, available: 8 }),
            CapacityVerdict::ShrinkSuggested { new_y: 3 }
        );
    }
}
