//! The fraction field F2(T), used as an exact stand-in for the Novikov field
//! when computing ranks.

use std::fmt;

use super::field::{Field, Ring, ScalarKind};
use super::laurent::LaurentPoly;
use super::poly::F2Poly;

/// `num / den` with `den(0) = 1` and `gcd(num body, den) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFn {
    num: LaurentPoly,
    den: F2Poly,
}

impl RationalFn {
    /// Builds and reduces `num / den`, where `den` is any nonzero Laurent polynomial.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let shifted = num.times_monomial(-den.shift());
        Self::reduce(shifted, den.body().clone())
    }

    fn reduce(num: LaurentPoly, den: F2Poly) -> Self {
        if num.is_zero() {
            return RationalFn::zero();
        }
        let g = num.body().gcd(&den);
        if g.is_one() {
            return RationalFn { num, den };
        }
        let (nb, _) = num.body().div_rem(&g);
        let (db, _) = den.div_rem(&g);
        RationalFn {
            num: LaurentPoly::from_parts(num.shift(), nb),
            den: db,
        }
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> LaurentPoly {
        LaurentPoly::from_parts(0, self.den.clone())
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }
}

impl From<LaurentPoly> for RationalFn {
    fn from(p: LaurentPoly) -> Self {
        RationalFn {
            num: p,
            den: F2Poly::one(),
        }
    }
}

impl Ring for RationalFn {
    const KIND: ScalarKind = ScalarKind::RationalFn;

    fn zero() -> Self {
        RationalFn {
            num: LaurentPoly::zero(),
            den: F2Poly::one(),
        }
    }
    fn one() -> Self {
        RationalFn {
            num: LaurentPoly::one(),
            den: F2Poly::one(),
        }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Self::reduce(self.num.add(&other.num), self.den.clone());
        }
        let a = self.num.mul(&LaurentPoly::from_parts(0, other.den.clone()));
        let b = other.num.mul(&LaurentPoly::from_parts(0, self.den.clone()));
        Self::reduce(a.add(&b), self.den.mul(&other.den))
    }
    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return RationalFn::zero();
        }
        Self::reduce(self.num.mul(&other.num), self.den.mul(&other.den))
    }
    /// T-adic valuation: the numerator's lowest exponent (denominators are units).
    fn order(&self) -> i64 {
        self.num.shift()
    }
}

impl Field for RationalFn {
    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero rational function");
        RationalFn {
            num: LaurentPoly::from_parts(-self.num.shift(), self.den.clone()),
            den: self.num.body().clone(),
        }
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.denominator())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn reduction_is_canonical() {
        // (T + T^2) / (T^3 + T^4) = 1 / T^2 after clearing powers and the 1+T factor
        let a = RationalFn::new(lp("T+T^2"), lp("T^3+T^4"));
        assert_eq!(a, RationalFn::from(LaurentPoly::monomial(-2)));
        let b = RationalFn::new(lp("1+T^2"), lp("1+T"));
        assert_eq!(b, RationalFn::from(lp("1+T")));
        assert!(b.is_polynomial());
    }

    #[test]
    fn inverse_of_one_plus_t() {
        let a = RationalFn::from(lp("1+T"));
        let inv = a.inv();
        assert_eq!(inv.to_string(), "(1)/(1+T)");
        assert_eq!(a.mul(&inv), RationalFn::one());
        let c = RationalFn::new(lp("T^-1"), lp("1+T+T^2"));
        assert_eq!(c.mul(&c.inv()), RationalFn::one());
        assert_eq!(c.add(&c), RationalFn::zero());
    }
}
