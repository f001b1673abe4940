//! Entanglement dynamics of self-inverse product Hamiltonians.
//!
//! The crate computes how fast bipartite evolution `exp(-i t X_A (x) X_B)`
//! with Hermitian involutions `X_A`, `X_B` can generate entanglement:
//! entropy rates for arbitrary inputs, the closed-form capability bound
//! that those rates saturate, and the operator-entanglement picture of the
//! propagator itself. A `verify` module re-derives every headline number
//! from independent oracles; the `entcap` binary exposes the same
//! computations on the command line.

pub mod capability;
pub mod error;
pub mod numerics;
pub mod operator_ent;
pub mod random;
pub mod report;
pub mod self_inverse;
pub mod state;
pub mod verify;

pub use error::{Error, Result};
