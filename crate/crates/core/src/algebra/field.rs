use std::fmt::{Debug, Display};

use super::linalg::{rref_generic, Rref};
use super::matrix::SparseMatrix;

/// Which member of the scalar tower a matrix carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScalarKind {
    F2,
    Laurent,
    RationalFn,
}

/// Commutative ring of characteristic 2. Subtraction coincides with addition,
/// so the trait only exposes `add`.
pub trait Ring: Clone + PartialEq + Eq + Debug + Display + Send + Sync + 'static {
    const KIND: ScalarKind;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;

    /// T-adic order, used to prefer low-order pivots. Zero for `F2`.
    fn order(&self) -> i64 {
        0
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring {
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self;

    /// Gauss-Jordan reduction; fields with a faster representation override it.
    fn rref(m: &SparseMatrix<Self>) -> Rref<Self> {
        rref_generic(m)
    }

    fn rank(m: &SparseMatrix<Self>) -> usize {
        Self::rref(m).rank()
    }
}
