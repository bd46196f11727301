use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Arguments outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(&'static str),
    /// The request does not fit inside the truncated Fock space.
    #[error("capacity error: needs total boson number {needed}, space holds up to {nmax}")]
    Capacity { needed: usize, nmax: usize },
    /// Operator shapes or number shifts do not line up.
    #[error("shape error: {0}")]
    Shape(&'static str),
    /// Independent extractions of one quantity disagree.
    #[error("integrity error: spread {spread:e} exceeds tolerance {tol:e}")]
    Integrity { spread: f64, tol: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;
