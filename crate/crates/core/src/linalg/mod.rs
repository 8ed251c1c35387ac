//! Exact linear algebra over Q, F_p and Z.

mod elim;
pub(crate) mod json;
mod matrix;
mod ring;
mod snf;

pub use matrix::{offsets, BlockBuilder, Matrix};
pub use ring::{Ring, Scalar};
pub use snf::SmithForm;
