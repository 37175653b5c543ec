//! Finite category engine for lifting nullity structures along comma
//! categories and Kan extensions.

pub mod check;
pub mod cli;
pub mod comma;
pub mod construct;
pub mod error;
pub mod fincat;
pub mod kan;
pub mod nullity;
pub mod order;
pub mod par;

pub use error::{Error, Result};
