pub mod algebra;
pub mod complex;
pub mod error;
pub mod filtered;
pub mod gen;
pub mod io;
pub mod level;
pub mod morse;
pub mod scomplex;
pub mod specseq;
pub mod suite;

pub use error::{Error, ParseError, Result};
