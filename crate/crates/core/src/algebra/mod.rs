//! Scalars of characteristic 2 and exact sparse linear algebra over them.

mod f2;
mod field;
mod laurent;
pub mod linalg;
mod matrix;
mod novikov;
mod poly;
mod ratfn;
mod window;

pub use f2::F2;
pub use field::{Field, Ring, ScalarKind};
pub use laurent::LaurentPoly;
pub use linalg::{
    image_basis, kernel_basis, rank, rank_laurent, rref, solve_in_image, solve_many, Rref,
};
pub use matrix::{SparseMatrix, SparseVector};
pub use novikov::NovikovWindow;
pub use poly::F2Poly;
pub use ratfn::RationalFn;
pub use window::window_rank;
