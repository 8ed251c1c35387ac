pub mod calculus;
pub mod chain;
pub mod cube;
pub mod error;
pub mod gen;
pub mod linalg;
pub mod report;
pub mod source;
pub mod tower;
pub mod verify;

pub use error::{Error, Result};
