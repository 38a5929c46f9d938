//! Exact construction and verification of class-group annihilators built from
//! Artin L-values at s = 0.

pub mod annihilator;
pub mod arith;
pub mod centre;
pub mod cyclotomic;
pub mod error;
pub mod fixtures;
pub mod groups;
pub mod lvalues;
pub mod twistcohom;

pub use error::{Error, Result};
