//! Exact integer and rational linear algebra. No floating point.

mod dense;
mod rational;
mod sparse;

pub use dense::{hermite_rows, integer_kernel, invariant_factors, smith_normal_form, IntMatrix, SmithForm};
pub use rational::QMatrix;
pub use sparse::{dense_rank, elimination_invariants, Invariants, SparseMatrix};
