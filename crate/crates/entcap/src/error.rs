//! Crate-wide error type. Numerical routines fail loudly: anything that
//! would silently degrade a reported rate or bound is surfaced here.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian (max |M - M^dag| = {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not an involution (max |M^2 - I| = {0:.3e})")]
    NotInvolution(f64),

    #[error("involution is trivial (equal to +/- identity); both eigenspaces must be nonempty")]
    TrivialInvolution,

    #[error("matrix is not unitary (max |V^dag V - I| = {0:.3e})")]
    NotUnitary(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("operator Schmidt rank {0} exceeds 2; two-term concurrence is undefined")]
    SchmidtRankTooHigh(usize),

    #[error("numerical consistency check failed: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
