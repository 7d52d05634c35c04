pub mod algebra;
pub mod error;
pub mod kleene;
pub mod solver;
pub mod term;
pub mod varfile;
pub mod variety;

pub use error::{Error, Result};
