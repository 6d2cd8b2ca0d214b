//! Exact rationals and residues modulo the integers.

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Formats as `p/q`, or `p` when the denominator is one.
pub fn format_rational(x: &Rational) -> String {
    x.to_string()
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

/// An element of Q/Z, stored as its representative in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QmodZ(Rational);

impl QmodZ {
    pub fn new(x: Rational) -> Self {
        QmodZ(frac(&x))
    }

    pub fn zero() -> Self {
        QmodZ(Rational::zero())
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        Self::new(rat(p, q))
    }

    /// The canonical lift in `[0, 1)`.
    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn into_value(self) -> Rational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::new(&self.0 * BigInt::from(k))
    }
}

impl From<Rational> for QmodZ {
    fn from(x: Rational) -> Self {
        QmodZ::new(x)
    }
}

impl Add for QmodZ {
    type Output = QmodZ;
    fn add(self, rhs: QmodZ) -> QmodZ {
        QmodZ::new(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a QmodZ> for &'a QmodZ {
    type Output = QmodZ;
    fn add(self, rhs: &QmodZ) -> QmodZ {
        QmodZ::new(&self.0 + &rhs.0)
    }
}

impl AddAssign for QmodZ {
    fn add_assign(&mut self, rhs: QmodZ) {
        *self = QmodZ::new(&self.0 + rhs.0);
    }
}

impl Sub for QmodZ {
    type Output = QmodZ;
    fn sub(self, rhs: QmodZ) -> QmodZ {
        QmodZ::new(self.0 - rhs.0)
    }
}

impl Neg for QmodZ {
    type Output = QmodZ;
    fn neg(self) -> QmodZ {
        QmodZ::new(-self.0)
    }
}

impl std::iter::Sum for QmodZ {
    fn sum<I: Iterator<Item = QmodZ>>(iter: I) -> QmodZ {
        iter.fold(QmodZ::zero(), |a, b| a + b)
    }
}

impl fmt::Display for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod Z", self.0)
    }
}

impl Serialize for QmodZ {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for QmodZ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map(QmodZ::new).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter writing a [`Rational`] as a `"p/q"` string.
pub mod as_string {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

pub fn sign(d: i64) -> i64 {
    d.signum()
}

/// `sign(d)^r` as ±1.
pub fn sign_pow(d: i64, r: usize) -> i64 {
    if d < 0 && r % 2 == 1 {
        -1
    } else {
        1
    }
}

pub fn lcm_denominators<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn abs(x: &Rational) -> Rational {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qmodz_reduces_into_unit_interval() {
        assert_eq!(QmodZ::from_ratio(-1, 4).value(), &rat(3, 4));
        assert_eq!(QmodZ::from_ratio(7, 3).value(), &rat(1, 3));
        assert!(QmodZ::from_ratio(5, 1).is_zero());
        let x = QmodZ::from_ratio(2, 3) + QmodZ::from_ratio(2, 3);
        assert_eq!(x, QmodZ::from_ratio(1, 3));
        assert_eq!(-QmodZ::from_ratio(1, 3), QmodZ::from_ratio(2, 3));
        assert_eq!(QmodZ::from_ratio(1, 4).scale(-3), QmodZ::from_ratio(1, 4));
    }

    #[test]
    fn rational_strings() {
        assert_eq!(format_rational(&rat(-6, 4)), "-3/2");
        assert_eq!(format_rational(&int(0)), "0");
        assert_eq!(parse_rational("10/-4").unwrap(), rat(-5, 2));
        assert_eq!(parse_rational(" 7 ").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn sign_powers() {
        assert_eq!(sign_pow(-2, 3), -1);
        assert_eq!(sign_pow(-2, 2), 1);
        assert_eq!(sign_pow(5, 1), 1);
    }
}
