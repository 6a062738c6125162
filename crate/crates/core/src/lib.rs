pub mod error;
pub mod cli;
pub mod contfrac;
pub mod diophantine;
pub mod dimension;
pub mod lattice;
pub mod padic;

pub use error::{Error, Result};
