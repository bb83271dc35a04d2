//! Laurent polynomials in the deck variable `T` over F2.

use std::fmt;
use std::str::FromStr;

use super::field::{Ring, ScalarKind};
use super::poly::F2Poly;
use crate::error::ParseError;

/// `T^shift * body`, where `body` has a nonzero constant term (or is zero, in
/// which case `shift` is 0). This is the unique normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    shift: i64,
    body: F2Poly,
}

impl LaurentPoly {
    pub fn from_parts(shift: i64, body: F2Poly) -> Self {
        match body.trailing_zeros() {
            None => LaurentPoly {
                shift: 0,
                body: F2Poly::zero(),
            },
            Some(tz) => LaurentPoly {
                shift: shift + tz as i64,
                body: body.shr(tz),
            },
        }
    }

    pub fn monomial(k: i64) -> Self {
        LaurentPoly {
            shift: k,
            body: F2Poly::one(),
        }
    }

    /// Sum of `T^e` over the given exponents (repeats cancel mod 2).
    pub fn from_exponents<I: IntoIterator<Item = i64>>(exps: I) -> Self {
        let exps: Vec<i64> = exps.into_iter().collect();
        let Some(&min) = exps.iter().min() else {
            return LaurentPoly::zero();
        };
        let body = F2Poly::from_exponents(exps.iter().map(|e| (e - min) as usize));
        LaurentPoly::from_parts(min, body)
    }

    pub fn min_exponent(&self) -> Option<i64> {
        (!self.body.is_zero()).then_some(self.shift)
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.body.degree().map(|d| self.shift + d as i64)
    }

    /// Exponents with nonzero coefficient, ascending.
    pub fn exponents(&self) -> Vec<i64> {
        self.body
            .exponents()
            .map(|e| self.shift + e as i64)
            .collect()
    }

    pub fn coeff(&self, k: i64) -> bool {
        k >= self.shift && !self.body.is_zero() && self.body.coeff((k - self.shift) as usize)
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// The polynomial factor with unit constant term.
    pub fn body(&self) -> &F2Poly {
        &self.body
    }

    /// Number of coefficients between the lowest and highest nonzero term.
    pub fn span(&self) -> usize {
        self.body.degree().map_or(0, |d| d + 1)
    }

    pub fn times_monomial(&self, k: i64) -> Self {
        if self.body.is_zero() {
            return self.clone();
        }
        LaurentPoly {
            shift: self.shift + k,
            body: self.body.clone(),
        }
    }
}

impl Ring for LaurentPoly {
    const KIND: ScalarKind = ScalarKind::Laurent;

    fn zero() -> Self {
        LaurentPoly {
            shift: 0,
            body: F2Poly::zero(),
        }
    }
    fn one() -> Self {
        LaurentPoly::monomial(0)
    }
    fn is_zero(&self) -> bool {
        self.body.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let base = self.shift.min(other.shift);
        let a = self.body.shl((self.shift - base) as usize);
        let b = other.body.shl((other.shift - base) as usize);
        LaurentPoly::from_parts(base, a.add(&b))
    }
    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return LaurentPoly::zero();
        }
        // bodies have unit constant terms, so the product does too
        LaurentPoly {
            shift: self.shift + other.shift,
            body: self.body.mul(&other.body),
        }
    }
    fn order(&self) -> i64 {
        self.shift
    }
}

impl fmt::Display for LaurentPoly {
    /// Ascending exponents: `T^-2+1+T^3`; zero prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .exponents()
            .into_iter()
            .map(|e| match e {
                0 => "1".to_string(),
                1 => "T".to_string(),
                e => format!("T^{e}"),
            })
            .collect();
        f.write_str(&terms.join("+"))
    }
}

impl FromStr for LaurentPoly {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let err = |why: &str| ParseError::Laurent(s.to_string(), why.to_string());
        if compact.is_empty() {
            return Err(err("empty"));
        }
        if compact == "0" {
            return Ok(LaurentPoly::zero());
        }
        let mut exps = Vec::new();
        // a leading sign belongs to an exponent only after `^`, so split on `+`
        // while keeping `^+k` / `^-k` intact
        let mut terms = Vec::new();
        let mut current = String::new();
        for c in compact.chars() {
            if c == '+' && !current.ends_with('^') {
                terms.push(std::mem::take(&mut current));
            } else {
                current.push(c);
            }
        }
        terms.push(current);
        for term in terms {
            let e = match term.as_str() {
                "" => return Err(err("empty term")),
                "1" => 0,
                "T" => 1,
                t => {
                    let Some(rest) = t.strip_prefix("T^") else {
                        return Err(err(&format!("bad term `{t}`")));
                    };
                    rest.parse::<i64>()
                        .map_err(|_| err(&format!("bad exponent `{rest}`")))?
                }
            };
            exps.push(e);
        }
        Ok(LaurentPoly::from_exponents(exps))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_round_trip() {
        let p: LaurentPoly = "T^-2 + 1 + T^3".parse().unwrap();
        assert_eq!(p.to_string(), "T^-2+1+T^3");
        assert_eq!(p.min_exponent(), Some(-2));
        assert_eq!(p.max_exponent(), Some(3));
        let q: LaurentPoly = "T^3+T^-2+1".parse().unwrap();
        assert_eq!(p, q);
        assert_eq!("T+T".parse::<LaurentPoly>().unwrap(), LaurentPoly::zero());
        assert_eq!(
            "T^+2".parse::<LaurentPoly>().unwrap(),
            LaurentPoly::monomial(2)
        );
        assert!("2T".parse::<LaurentPoly>().is_err());
        assert!("T^".parse::<LaurentPoly>().is_err());
        assert!("".parse::<LaurentPoly>().is_err());
    }

    #[test]
    fn arithmetic() {
        let a: LaurentPoly = "1+T".parse().unwrap();
        let b: LaurentPoly = "T^-1+1".parse().unwrap();
        assert_eq!(a.mul(&b).to_string(), "T^-1+T");
        assert_eq!(a.add(&a), LaurentPoly::zero());
        assert_eq!(a.add(&LaurentPoly::one()), LaurentPoly::monomial(1));
    }
}
