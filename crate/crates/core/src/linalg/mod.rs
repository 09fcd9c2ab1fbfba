//! Exact linear algebra over the integers, the rationals and GF(2).
//!
//! Nothing here rounds: integers are arbitrary precision, rationals are kept
//! in lowest terms, and GF(2) matrices are bit-packed.

pub mod f2;
pub mod int;
pub mod rat;

pub use f2::F2Matrix;
pub use int::{contains_rows, hnf, lattice_index, lattice_quotient, rank, snf_divisors, solve_integer, IntMatrix, LatticeIndex, Quotient};
pub use rat::{QVec, RatMatrix, ScaledMatrix};
