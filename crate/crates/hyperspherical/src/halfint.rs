//! Exact half-integer arithmetic.
//!
//! Representation weights `l, m, n` and their dotted partners are integers or
//! half-integers. Storing twice the value as an `i64` keeps index arithmetic
//! and loop bounds exact; floats enter only at evaluation time.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

/// A half-integer stored as twice its value.
///
/// `HalfInt { twice: 3 }` is 3/2, `HalfInt { twice: -4 }` is -2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };
    pub const HALF: HalfInt = HalfInt { twice: 1 };
    pub const ONE: HalfInt = HalfInt { twice: 2 };

    /// Builds from twice the value.
    pub const fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }

    pub const fn from_int(n: i64) -> Self {
        HalfInt { twice: 2 * n }
    }

    pub const fn twice(self) -> i64 {
        self.twice
    }

    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    /// True when `self - other` is an integer (same parity).
    pub const fn same_parity(self, other: HalfInt) -> bool {
        (self.twice - other.twice) % 2 == 0
    }

    pub fn as_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }

    /// The integer value, when there is one.
    pub fn as_int(self) -> Option<i64> {
        if self.is_integer() {
            Some(self.twice / 2)
        } else {
            None
        }
    }

    pub fn abs(self) -> HalfInt {
        HalfInt {
            twice: self.twice.abs(),
        }
    }

    pub fn is_negative(self) -> bool {
        self.twice < 0
    }

    /// Inclusive range `lo, lo+1, ..., hi` in unit steps.
    pub fn range_inclusive(lo: HalfInt, hi: HalfInt) -> impl Iterator<Item = HalfInt> {
        debug_assert!(lo.same_parity(hi));
        (0..)
            .map(move |k| HalfInt {
                twice: lo.twice + 2 * k,
            })
            .take_while(move |h| h.twice <= hi.twice)
    }

    /// All weights `-l, -l+1, ..., l` of a spin-`l` representation.
    pub fn weights(l: HalfInt) -> impl Iterator<Item = HalfInt> {
        HalfInt::range_inclusive(-l, l)
    }

    /// Number of weights `2l+1`; zero for negative `l`.
    pub fn dim(l: HalfInt) -> usize {
        if l.twice < 0 {
            0
        } else {
            (l.twice + 1) as usize
        }
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt {
            twice: self.twice + rhs.twice,
        }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt {
            twice: self.twice - rhs.twice,
        }
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt { twice: -self.twice }
    }
}

impl From<i64> for HalfInt {
    fn from(n: i64) -> Self {
        HalfInt::from_int(n)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// Parse error for [`HalfInt::from_str`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid half-integer `{0}`; expected forms like `2`, `-1`, `1/2`, `-3/2`")]
pub struct ParseHalfIntError(pub String);

impl FromStr for HalfInt {
    type Err = ParseHalfIntError;

    /// Accepts `"2"`, `"-1"`, `"1/2"`, `"-3/2"`, `"0.5"`, `"-1.5"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            if den.trim() != "2" {
                return Err(ParseHalfIntError(s.to_string()));
            }
            let n: i64 = num
                .trim()
                .parse()
                .map_err(|_| ParseHalfIntError(s.to_string()))?;
            return Ok(HalfInt::from_twice(n));
        }
        if let Ok(n) = s.parse::<i64>() {
            return Ok(HalfInt::from_int(n));
        }
        // decimal form: only .0 and .5 are representable
        if let Ok(x) = s.parse::<f64>() {
            let twice = 2.0 * x;
            if (twice - twice.round()).abs() < 1e-9 {
                return Ok(HalfInt::from_twice(twice.round() as i64));
            }
        }
        Err(ParseHalfIntError(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_is_exact_and_closed() {
        let a = HalfInt::from_twice(3); // 3/2
        let b = HalfInt::from_int(-2);
        assert_eq!(a + b, HalfInt::from_twice(-1));
        assert_eq!(a - b, HalfInt::from_twice(7));
        assert_eq!(-a, HalfInt::from_twice(-3));
        assert!(a > b);
        assert!(!a.is_integer());
        assert!(b.is_integer());
        assert_eq!(a.as_f64(), 1.5);
    }

    #[test]
    fn weights_enumeration() {
        let l = HalfInt::from_twice(3); // 3/2
        let w: Vec<i64> = HalfInt::weights(l).map(|h| h.twice()).collect();
        assert_eq!(w, vec![-3, -1, 1, 3]);
        assert_eq!(HalfInt::dim(l), 4);
        assert_eq!(HalfInt::dim(HalfInt::ZERO), 1);
    }

    #[test]
    fn parsing_round_trips() {
        for s in ["2", "-1", "1/2", "-3/2", "0"] {
            let h: HalfInt = s.parse().unwrap();
            assert_eq!(h.to_string(), s);
        }
        assert_eq!("0.5".parse::<HalfInt>().unwrap(), HalfInt::HALF);
        assert_eq!("-1.5".parse::<HalfInt>().unwrap(), HalfInt::from_twice(-3));
        assert!("1/3".parse::<HalfInt>().is_err());
        assert!("x".parse::<HalfInt>().is_err());
    }
}
