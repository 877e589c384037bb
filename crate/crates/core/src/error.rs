use thiserror::Error;

use crate::jack::Partition;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed input: wrong shapes, non-Hermitian matrices, bad flags.
    #[error("validation error: {0}")]
    Validation(String),
    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A generalized Pochhammer symbol vanished, so the series has a pole.
    #[error("index pole: (mu)_lambda vanishes for mu = {mu}, lambda = {partition}")]
    IndexPole { mu: String, partition: Partition },
    /// A Gamma factor hit a pole.
    #[error("gamma pole in factor {0}")]
    GammaPole(String),
    /// Rejection sampling accepted too few proposals to be useful.
    #[error("acceptance rate {rate:.3e} below {floor:.0e}; use self-normalized importance sampling instead")]
    LowAcceptance { rate: f64, floor: f64 },
    /// The quaternionic matrix form is not materialized.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A numerical procedure failed (e.g. repeated Cholesky breakdown).
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
