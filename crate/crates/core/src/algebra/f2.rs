use std::fmt;

use super::field::{Field, Ring, ScalarKind};
use super::linalg::{rank_f2, rref_f2, Rref};
use super::matrix::SparseMatrix;

/// An element of the two-element field.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F2(pub bool);

impl F2 {
    pub const ZERO: F2 = F2(false);
    pub const ONE: F2 = F2(true);

    /// Reduces an integer count mod 2.
    pub fn from_count(n: i64) -> F2 {
        F2(n.rem_euclid(2) == 1)
    }
}

impl fmt::Display for F2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.0 { "1" } else { "0" })
    }
}

impl Ring for F2 {
    const KIND: ScalarKind = ScalarKind::F2;

    fn zero() -> Self {
        F2::ZERO
    }
    fn one() -> Self {
        F2::ONE
    }
    fn is_zero(&self) -> bool {
        !self.0
    }
    fn add(&self, other: &Self) -> Self {
        F2(self.0 ^ other.0)
    }
    fn mul(&self, other: &Self) -> Self {
        F2(self.0 & other.0)
    }
}

impl Field for F2 {
    fn inv(&self) -> Self {
        assert!(self.0, "inverse of zero in F2");
        *self
    }

    fn rref(m: &SparseMatrix<Self>) -> Rref<Self> {
        rref_f2(m)
    }

    fn rank(m: &SparseMatrix<Self>) -> usize {
        rank_f2(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xor_addition_and_self_inverse() {
        assert_eq!(F2::ONE.add(&F2::ONE), F2::ZERO);
        assert_eq!(F2::ONE.inv(), F2::ONE);
        assert_eq!(F2::from_count(2), F2::ZERO);
        assert_eq!(F2::from_count(-3), F2::ONE);
    }
}
