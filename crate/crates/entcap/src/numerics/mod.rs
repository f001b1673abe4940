//! Dense complex linear algebra sized for few-qubit / truncated-boson
//! problems (dimensions up to a couple hundred). Everything is
//! deterministic: no pivoting heuristics, stable orderings, fixed
//! eigenvector phase conventions.

mod eigen;
mod matrix;
mod optimize;
mod svd;

pub use eigen::{eigh, expm_minus_i, propagate, EigenDecomposition};
pub use matrix::{commutator, inner, kron, outer, partial_trace, vec_norm, ComplexMatrix, Subsystem};
pub use optimize::{central_diff, golden_max, ScalarMaxResult};
pub use svd::{svd, SingularValueDecomposition};

/// Absolute tolerance below which a matrix is accepted as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-10;
