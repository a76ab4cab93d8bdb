pub mod classify;
pub mod cli;
pub mod cohomology;
pub mod diagram;
pub mod error;
pub mod ideal;
pub mod localclass;
pub mod pattern;
pub mod perm;
pub mod poly;
pub mod schubert;
pub mod suites;
pub mod symfunc;

pub use error::{Error, Result};
pub use perm::Permutation;
