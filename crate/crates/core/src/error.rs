use thiserror::Error;

/// Errors raised by the numerical kernels and entropy measures.
///
/// Verification findings are never reported through this type; a violated
/// inequality is data in a [`crate::verify::VerificationReport`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix data has {len} entries, expected {dim}x{dim}")]
    NotSquare { dim: usize, len: usize },

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("dimension {dim} exceeds the cap of {cap}")]
    DimensionTooLarge { dim: usize, cap: usize },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix is not Hermitian (max |m - m†| entry {0:e})")]
    NotHermitian(f64),

    #[error(
        "Jacobi iteration did not converge in {sweeps} sweeps (off-diagonal norm {off_norm:e})"
    )]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("eigenvalue {0:e} is below the PSD slack")]
    NegativeEigenvalue(f64),

    #[error("trace is {0}, expected 1")]
    TraceNotOne(f64),

    #[error("operator is not positive semi-definite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("alpha = {0} is out of range")]
    AlphaOutOfRange(f64),

    #[error("alpha and beta must differ (both {0})")]
    ParamsEqual(f64),

    #[error("vectors are not orthonormal (max Gram deviation {0:e})")]
    NotOrthonormal(f64),

    #[error("matrix is not unitary (max |UU† - I| entry {0:e})")]
    NotUnitary(f64),

    #[error("invalid projector set: {0}")]
    InvalidProjectors(String),

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("invalid suite configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
