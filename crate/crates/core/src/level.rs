//! Exact filtration values: rationals and rationals extended by `+inf`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::ParseError;

pub type Rational = BigRational;

/// Builds `num/den` as an exact rational.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"` (signed decimal integers).
pub fn parse_rational(s: &str) -> Result<Rational, ParseError> {
    let s = s.trim();
    let bad = || ParseError::Rational(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise (reduced, q > 0).
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A rational number or `+inf`. Used for spectral values and level-shift
/// certificates; `+inf` is a genuine value, never a sentinel.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Extended {
    Finite(Rational),
    Infinity,
}

impl Extended {
    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Extended::Finite(r) => Some(r),
            Extended::Infinity => None,
        }
    }

    /// `self + c` with `inf + c = inf`.
    pub fn plus(&self, c: &Rational) -> Extended {
        match self {
            Extended::Finite(r) => Extended::Finite(r + c),
            Extended::Infinity => Extended::Infinity,
        }
    }

    pub fn plus_ext(&self, other: &Extended) -> Extended {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(a + b),
            _ => Extended::Infinity,
        }
    }

    pub fn parse(s: &str) -> Result<Extended, ParseError> {
        match s.trim() {
            "inf" | "+inf" | "∞" => Ok(Extended::Infinity),
            other => parse_rational(other).map(Extended::Finite),
        }
    }
}

impl From<Rational> for Extended {
    fn from(r: Rational) -> Self {
        Extended::Finite(r)
    }
}

impl PartialOrd for Extended {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Extended {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => a.cmp(b),
            (Extended::Finite(_), Extended::Infinity) => Ordering::Less,
            (Extended::Infinity, Extended::Finite(_)) => Ordering::Greater,
            (Extended::Infinity, Extended::Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(r) => f.write_str(&format_rational(r)),
            Extended::Infinity => f.write_str("inf"),
        }
    }
}

/// `max(0, r)`.
pub fn clamp_nonnegative(r: Rational) -> Rational {
    if r.is_negative() {
        Rational::zero()
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("5/2").unwrap(), rat(5, 2));
        assert_eq!(parse_rational(" -3 ").unwrap(), int(-3));
        assert_eq!(parse_rational("4/2").unwrap(), int(2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&rat(-6, 4)), "-3/2");
        assert_eq!(format_rational(&int(7)), "7");
    }

    #[test]
    fn extended_order() {
        let one = Extended::Finite(int(1));
        assert!(one < Extended::Infinity);
        assert_eq!(Extended::Infinity.plus(&int(3)), Extended::Infinity);
        assert_eq!(Extended::parse("inf").unwrap(), Extended::Infinity);
        assert_eq!(one.to_string(), "1");
    }
}
