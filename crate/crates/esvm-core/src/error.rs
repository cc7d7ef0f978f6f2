//! Error type shared across the crate.

use alloc::boxed::Box;
use core::fmt;

/// Everything that can go wrong while building models, running samplers,
/// or fitting control variates.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A vector or matrix had the wrong length for the operation.
    DimensionMismatch { expected: usize, actual: usize },
    /// An input contained NaN or infinity.
    NonFiniteInput { context: &'static str },
    /// An input collection was empty where at least one element is required.
    EmptyInput { context: &'static str },
    /// A scalar parameter was outside its admissible range.
    InvalidParameter { context: &'static str },
    /// A minibatch index was not in `0..n_components`.
    BatchIndexOutOfRange { index: usize, n_components: usize },
    /// A minibatch contained the same index twice.
    DuplicateBatchIndex { index: usize },
    /// Requested batch size exceeds the number of likelihood components.
    BatchTooLarge { batch_size: usize, n_components: usize },
    /// Autocovariance lag at or beyond the series length.
    LagOutOfRange { lag: usize, len: usize },
    /// Window truncation point at or beyond the series length.
    TruncationTooLarge { truncation: usize, len: usize },
    /// The chain reached a non-finite state.
    Diverged { step: usize, step_size: f64 },
    /// The Gram matrix of the design is numerically singular.
    SingularGram { condition: f64 },
    /// Gradient descent on the potential did not reach the gradient tolerance.
    ModeSearchFailed { grad_norm: f64 },
    /// The normal-equation system stayed singular after ridge escalation.
    SingularSystem { min_eigenvalue: f64 },
    /// A replicate run failed; carries the replicate index and the cause.
    ReplicateFailed { index: usize, source: Box<Error> },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, actual } => {
                write!(f, "dimension mismatch: expected {expected}, got {actual}")
            }
            Error::NonFiniteInput { context } => {
                write!(f, "non-finite input: {context}")
            }
            Error::EmptyInput { context } => write!(f, "empty input: {context}"),
            Error::InvalidParameter { context } => {
                write!(f, "invalid parameter: {context}")
            }
            Error::BatchIndexOutOfRange {
                index,
                n_components,
            } => write!(
                f,
                "batch index {index} out of range for {n_components} components"
            ),
            Error::DuplicateBatchIndex { index } => {
                write!(f, "duplicate batch index {index}")
            }
            Error::BatchTooLarge {
                batch_size,
                n_components,
            } => write!(
                f,
                "batch size {batch_size} exceeds component count {n_components}"
            ),
            Error::LagOutOfRange { lag, len } => {
                write!(f, "lag {lag} out of range for series of length {len}")
            }
            Error::TruncationTooLarge { truncation, len } => write!(
                f,
                "truncation point {truncation} must be below series length {len}"
            ),
            Error::Diverged { step, step_size } => write!(
                f,
                "non-finite state at step {step}; consider a step size smaller than {step_size}"
            ),
            Error::SingularGram { condition } => write!(
                f,
                "design Gram matrix is numerically singular (condition estimate {condition:.3e})"
            ),
            Error::ModeSearchFailed { grad_norm } => write!(
                f,
                "mode search did not converge (gradient norm reached {grad_norm:.3e})"
            ),
            Error::SingularSystem { min_eigenvalue } => write!(
                f,
                "normal equations singular after ridge escalation \
                 (smallest eigenvalue estimate {min_eigenvalue:.3e})"
            ),
            Error::ReplicateFailed { index, source } => {
                write!(f, "replicate {index} failed: {source}")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
