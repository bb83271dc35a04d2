//! Truncated Novikov series with relative precision tracking.
//!
//! A window stores the coefficients of `sum a_j T^j` for `j` in
//! `[origin, origin + width)`. Inexact windows say nothing about exponents at
//! or above `origin + width` (the absolute precision). A nonzero inexact
//! window always starts at its valuation; an inexact window with no known
//! nonzero coefficient is "zero to precision".

use super::field::Ring;
use super::laurent::LaurentPoly;
use super::poly::F2Poly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NovikovWindow {
    pub origin: i64,
    pub width: usize,
    /// Bit `i` is the coefficient of `T^(origin + i)`.
    pub coeffs: F2Poly,
    pub exact: bool,
}

impl NovikovWindow {
    pub fn exact_zero() -> Self {
        NovikovWindow {
            origin: 0,
            width: 1,
            coeffs: F2Poly::zero(),
            exact: true,
        }
    }

    /// Exact window holding `p`; `None` if its span exceeds `w`.
    pub fn from_laurent(p: &LaurentPoly, w: usize) -> Option<Self> {
        if p.is_zero() {
            return Some(Self::exact_zero());
        }
        if p.span() > w {
            return None;
        }
        Some(NovikovWindow {
            origin: p.shift(),
            width: w,
            coeffs: p.body().clone(),
            exact: true,
        })
    }

    /// Inexact window for a value known modulo `T^prec`, keeping at most `w` coefficients.
    fn approx(known: LaurentPoly, prec: i64, w: usize) -> Self {
        match known.min_exponent() {
            None => NovikovWindow {
                origin: prec - w as i64,
                width: w,
                coeffs: F2Poly::zero(),
                exact: false,
            },
            Some(v) => {
                let width = ((prec - v) as usize).min(w);
                NovikovWindow {
                    origin: v,
                    width,
                    coeffs: known.body().truncate(width),
                    exact: false,
                }
            }
        }
    }

    /// Exact result if it fits in `w`, otherwise its first `w` coefficients.
    fn from_exact_capped(p: LaurentPoly, w: usize) -> Self {
        match Self::from_laurent(&p, w) {
            Some(x) => x,
            None => {
                let v = p.shift();
                Self::approx(p, v + w as i64, w)
            }
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        self.exact && self.coeffs.is_zero()
    }

    /// No coefficient is known to be nonzero (exact zero or zero to precision).
    pub fn looks_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    /// Lowest exponent with a known nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.trailing_zeros().map(|t| self.origin + t as i64)
    }

    /// Absolute precision; `None` for exact values.
    pub fn precision(&self) -> Option<i64> {
        (!self.exact).then_some(self.origin + self.width as i64)
    }

    /// The known part as a Laurent polynomial.
    pub fn known(&self) -> LaurentPoly {
        LaurentPoly::from_parts(self.origin, self.coeffs.clone())
    }

    fn known_below(&self, prec: i64) -> LaurentPoly {
        let k = self.known();
        if k.is_zero() || prec <= k.shift() {
            return LaurentPoly::zero();
        }
        LaurentPoly::from_parts(k.shift(), k.body().truncate((prec - k.shift()) as usize))
    }

    pub fn add(&self, other: &Self, w: usize) -> Self {
        if self.is_exact_zero() {
            return other.clone();
        }
        if other.is_exact_zero() {
            return self.clone();
        }
        match (self.precision(), other.precision()) {
            (None, None) => Self::from_exact_capped(self.known().add(&other.known()), w),
            (a, b) => {
                let prec = a.into_iter().chain(b).min().expect("one side is inexact");
                let sum = self.known_below(prec).add(&other.known_below(prec));
                Self::approx(sum, prec, w)
            }
        }
    }

    pub fn mul(&self, other: &Self, w: usize) -> Self {
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::exact_zero();
        }
        match (self.valuation(), other.valuation()) {
            (Some(va), Some(vb)) => {
                if self.exact && other.exact {
                    return Self::from_exact_capped(self.known().mul(&other.known()), w);
                }
                // relative precision of a product is the smaller one
                let rel = [self, other]
                    .iter()
                    .filter_map(|x| {
                        x.precision()
                            .map(|p| (p - x.valuation().expect("nonzero")) as usize)
                    })
                    .min()
                    .expect("one side is inexact")
                    .min(w);
                let prod = self.known().mul(&other.known());
                Self::approx(prod, va + vb + rel as i64, w)
            }
            // zero to precision P times a value of valuation v is zero to precision P + v
            (None, Some(v)) => {
                Self::approx(LaurentPoly::zero(), self.origin + self.width as i64 + v, w)
            }
            (Some(v), None) => Self::approx(
                LaurentPoly::zero(),
                other.origin + other.width as i64 + v,
                w,
            ),
            (None, None) => Self::approx(
                LaurentPoly::zero(),
                self.origin + self.width as i64 + other.origin + other.width as i64,
                w,
            ),
        }
    }

    /// Inverse of a value with known valuation; panics otherwise.
    pub fn inv(&self, w: usize) -> Self {
        let v = self
            .valuation()
            .expect("inverse of a window with no known valuation");
        let body = self.coeffs.shr((v - self.origin) as usize);
        if self.exact && body.is_one() {
            return NovikovWindow {
                origin: -v,
                width: w,
                coeffs: F2Poly::one(),
                exact: true,
            };
        }
        let rel = match self.precision() {
            Some(p) => ((p - v) as usize).min(w),
            None => w,
        };
        NovikovWindow {
            origin: -v,
            width: rel,
            coeffs: body.series_inverse(rel),
            exact: false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_one_plus_t_is_geometric() {
        let p: LaurentPoly = "1+T".parse().unwrap();
        let a = NovikovWindow::from_laurent(&p, 8).unwrap();
        let inv = a.inv(8);
        assert!(!inv.exact);
        assert_eq!(inv.coeffs.weight(), 8);
        let one = a.mul(&inv, 8);
        assert_eq!(one.valuation(), Some(0));
        assert_eq!(one.known(), LaurentPoly::one());
        assert_eq!(one.precision(), Some(8));
    }

    #[test]
    fn cancellation_loses_precision() {
        let p: LaurentPoly = "1+T".parse().unwrap();
        let a = NovikovWindow::from_laurent(&p, 8).unwrap().inv(8);
        let z = a.add(&a, 8);
        assert!(z.looks_zero() && !z.exact);
        assert_eq!(z.precision(), Some(8));
        assert!(NovikovWindow::from_laurent(&"1+T^9".parse().unwrap(), 8).is_none());
    }
}
