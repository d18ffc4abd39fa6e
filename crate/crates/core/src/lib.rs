//! Law-of-large-numbers analysis for random max-plus recursions
//! `x(n+1) = A(n) ⊗ x(n)`.

pub mod error;
pub mod exponents;
pub mod fixtures;
pub mod law;
pub mod report;
pub mod stats;
pub mod structure;
pub mod trajectory;
pub mod tropical;
pub mod verdict;

pub use error::{Error, Result};
