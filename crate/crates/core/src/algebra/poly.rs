//! Dense polynomials over F2 packed into 64-bit words.

use std::cmp::Ordering;

/// A polynomial in `F2[T]`; bit `i` of the word vector is the coefficient of `T^i`.
/// Normalized so that the last word is nonzero (the zero polynomial has no words).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct F2Poly {
    words: Vec<u64>,
}

impl F2Poly {
    pub fn zero() -> Self {
        F2Poly { words: Vec::new() }
    }

    pub fn one() -> Self {
        F2Poly { words: vec![1] }
    }

    pub fn monomial(k: usize) -> Self {
        let mut p = F2Poly::zero();
        p.set(k, true);
        p
    }

    pub fn from_exponents<I: IntoIterator<Item = usize>>(exps: I) -> Self {
        let mut p = F2Poly::zero();
        for e in exps {
            p.toggle(e);
        }
        p
    }

    fn normalize(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words.len() == 1 && self.words[0] == 1
    }

    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + (63 - last.leading_zeros() as usize))
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn trailing_zeros(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn coeff(&self, k: usize) -> bool {
        self.words
            .get(k / 64)
            .is_some_and(|w| (w >> (k % 64)) & 1 == 1)
    }

    pub fn set(&mut self, k: usize, on: bool) {
        if self.coeff(k) != on {
            self.toggle(k);
        }
    }

    pub fn toggle(&mut self, k: usize) {
        let w = k / 64;
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        self.words[w] ^= 1 << (k % 64);
        self.normalize();
    }

    pub fn exponents(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn add(&self, other: &F2Poly) -> F2Poly {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = long.words.clone();
        for (w, s) in words.iter_mut().zip(&short.words) {
            *w ^= s;
        }
        let mut p = F2Poly { words };
        p.normalize();
        p
    }

    pub fn add_assign(&mut self, other: &F2Poly) {
        if self.words.len() < other.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (w, s) in self.words.iter_mut().zip(&other.words) {
            *w ^= s;
        }
        self.normalize();
    }

    pub fn shl(&self, k: usize) -> F2Poly {
        if self.is_zero() {
            return F2Poly::zero();
        }
        let (ws, bs) = (k / 64, k % 64);
        let mut words = vec![0u64; self.words.len() + ws + 1];
        for (i, &w) in self.words.iter().enumerate() {
            words[i + ws] ^= w << bs;
            if bs != 0 {
                words[i + ws + 1] ^= w >> (64 - bs);
            }
        }
        let mut p = F2Poly { words };
        p.normalize();
        p
    }

    pub fn shr(&self, k: usize) -> F2Poly {
        let (ws, bs) = (k / 64, k % 64);
        if ws >= self.words.len() {
            return F2Poly::zero();
        }
        let src = &self.words[ws..];
        let mut words = vec![0u64; src.len()];
        for i in 0..src.len() {
            words[i] = src[i] >> bs;
            if bs != 0 && i + 1 < src.len() {
                words[i] |= src[i + 1] << (64 - bs);
            }
        }
        let mut p = F2Poly { words };
        p.normalize();
        p
    }

    /// Keeps the coefficients of `T^0 .. T^(n-1)`.
    pub fn truncate(&self, n: usize) -> F2Poly {
        let full = n / 64;
        let rem = n % 64;
        let mut words: Vec<u64> = self.words.iter().take(full + 1).copied().collect();
        if words.len() > full {
            if rem == 0 {
                words.truncate(full);
            } else {
                words[full] &= (1u64 << rem) - 1;
            }
        }
        let mut p = F2Poly { words };
        p.normalize();
        p
    }

    pub fn mul(&self, other: &F2Poly) -> F2Poly {
        if self.is_zero() || other.is_zero() {
            return F2Poly::zero();
        }
        let (a, b) = if self.weight() <= other.weight() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = vec![0u64; a.words.len() + b.words.len() + 1];
        for e in a.exponents() {
            let (ws, bs) = (e / 64, e % 64);
            for (i, &w) in b.words.iter().enumerate() {
                words[i + ws] ^= w << bs;
                if bs != 0 {
                    words[i + ws + 1] ^= w >> (64 - bs);
                }
            }
        }
        let mut p = F2Poly { words };
        p.normalize();
        p
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &F2Poly) -> (F2Poly, F2Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let mut rem = self.clone();
        let mut quot = F2Poly::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let shift = rd - dd;
            quot.toggle(shift);
            rem.add_assign(&divisor.shl(shift));
        }
        (quot, rem)
    }

    pub fn gcd(&self, other: &F2Poly) -> F2Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a
    }

    /// Inverse of a power series with nonzero constant term, modulo `T^n`.
    pub fn series_inverse(&self, n: usize) -> F2Poly {
        assert!(self.coeff(0), "series inverse needs a unit constant term");
        let mut inv = F2Poly::zero();
        // inv_k = sum_{i=1..k} s_i inv_{k-i}
        let mut bits = vec![false; n];
        for k in 0..n {
            let mut c = k == 0;
            for i in self.exponents().take_while(|&i| i <= k) {
                if i >= 1 && bits[k - i] {
                    c = !c;
                }
            }
            bits[k] = c;
        }
        for (k, b) in bits.into_iter().enumerate() {
            if b {
                inv.toggle(k);
            }
        }
        inv
    }
}

impl PartialOrd for F2Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for F2Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(exps: &[usize]) -> F2Poly {
        F2Poly::from_exponents(exps.iter().copied())
    }

    #[test]
    fn multiply_and_divide() {
        // (1+T)^2 = 1+T^2 in characteristic 2
        let a = p(&[0, 1]);
        assert_eq!(a.mul(&a), p(&[0, 2]));
        let (q, r) = p(&[0, 2]).div_rem(&a);
        assert_eq!(q, a);
        assert!(r.is_zero());
        let big = p(&[0, 70, 130]);
        assert_eq!(big.shl(5).shr(5), big);
        assert_eq!(big.degree(), Some(130));
    }

    #[test]
    fn gcd_and_series_inverse() {
        let a = p(&[0, 1]);
        let b = p(&[0, 1, 2]);
        assert_eq!(a.mul(&b).gcd(&a.mul(&a)), a);
        let inv = a.series_inverse(10);
        // 1/(1+T) = 1+T+T^2+...
        assert_eq!(inv, p(&[0, 1, 2, 3, 4, 5, 6, 7, 8, 9]));
        assert_eq!(a.mul(&inv).truncate(10), F2Poly::one());
    }
}
