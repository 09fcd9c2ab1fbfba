//! Index of the anemic Hecke algebra inside the full Hecke algebra of
//! weight-2 cusp forms on Γ₀(N), N prime, computed from modular symbols.

pub mod arith;
pub mod cli;
pub mod error;
pub mod hecke;
pub mod index;
pub mod json;
pub mod linalg;
pub mod manin;
pub mod quadratic;

pub use error::{Error, Result};
