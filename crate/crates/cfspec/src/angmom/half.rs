//! Half-integer angular momentum values stored as twice their value, so that 9/2 is
//! represented exactly and arithmetic stays in integers.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use crate::error::CoreError;

/// An integer or half-odd-integer quantum number (j, m, L, S, ...).
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct HalfInt {
    twice: i32,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };

    /// Construct from twice the value: `from_twice(9)` is 9/2.
    pub const fn from_twice(twice: i32) -> Self {
        HalfInt { twice }
    }

    /// Construct from an integer value.
    pub const fn from_int(n: i32) -> Self {
        HalfInt { twice: 2 * n }
    }

    /// Twice the value, always an exact integer.
    pub const fn twice(self) -> i32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    /// True when `m` is a valid projection of `self` taken as a magnitude j:
    /// |m| <= j and m has the same integer/half-integer character.
    pub fn admits_projection(self, m: HalfInt) -> bool {
        m.twice.abs() <= self.twice && (self.twice - m.twice) % 2 == 0
    }

    pub const fn abs(self) -> HalfInt {
        HalfInt { twice: self.twice.abs() }
    }

    /// Multiplicity 2j + 1; errors on negative or half-odd j.
    pub fn multiplicity(self) -> Result<usize, CoreError> {
        if self.twice < 0 {
            return Err(CoreError::argument(format!("negative magnitude {self}")));
        }
        Ok(self.twice as usize + 1)
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice + rhs.twice }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice - rhs.twice }
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt { twice: -self.twice }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl FromStr for HalfInt {
    type Err = CoreError;

    /// Accepts "3", "-2" or "9/2", "-1/2".
    fn from_str(s: &str) -> Result<Self, CoreError> {
        let bad = || CoreError::argument(format!("cannot parse {s:?} as integer or half-integer"));
        if let Some((num, den)) = s.split_once('/') {
            if den.trim() != "2" {
                return Err(bad());
            }
            let n: i32 = num.trim().parse().map_err(|_| bad())?;
            if n % 2 == 0 {
                return Err(bad()); // "4/2" is written "2"
            }
            Ok(HalfInt::from_twice(n))
        } else {
            let n: i32 = s.trim().parse().map_err(|_| bad())?;
            Ok(HalfInt::from_int(n))
        }
    }
}
