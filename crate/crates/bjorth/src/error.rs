//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite coordinate in {context}")]
    NonFinite { context: &'static str },

    #[error("vector must have dimension >= 1")]
    EmptyVector,

    #[error("the zero vector has no support set")]
    ZeroVector,

    #[error("invalid norm exponent p = {p}; require p >= 1 or \"inf\"")]
    InvalidExponent { p: f64 },

    #[error("weighted norm requires strictly positive finite weights")]
    InvalidWeight,

    #[error("polyhedral generators must span the space (rank {rank} < dim {dim})")]
    DegenerateGenerators { rank: usize, dim: usize },

    #[error("pencil requires linearly independent vectors")]
    DependentPencil,

    #[error("alpha = {alpha} lies inside the orthogonality interval [{lo}, {hi}]")]
    AlphaInsideInterval { alpha: f64, lo: f64, hi: f64 },

    #[error("failed to bracket the orthogonality interval after {doublings} doublings")]
    BracketingFailed { doublings: u32 },

    #[error("integrand pole at t = {t}: t + f(t) = {value}")]
    IntegrandPole { t: f64, value: f64 },

    #[error("operator matrix must be square and finite")]
    InvalidOperator,

    #[error("invalid sampler config: {reason}")]
    InvalidSamplerConfig { reason: &'static str },

    #[error("operator is singular within tolerance")]
    SingularOperator,

    #[error("sampler exhausted its rejection budget ({budget} consecutive rejections)")]
    SamplerExhausted { budget: u32 },

    #[error("linear program for the polyhedral dual norm failed: {reason}")]
    DualNormLp { reason: String },
}

/// Coarse classification used by the external interfaces: the CLI turns it
/// into a process exit code, the C ABI into a status code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// The input itself is ill-formed (bad numbers, bad shapes, bad config).
    Malformed,
    /// Well-formed inputs whose dimensions disagree.
    DimensionMismatch,
    /// Legal data outside an operation's domain.
    Precondition,
    /// A numerical routine failed in a way valid inputs cannot trigger.
    Internal,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::NonFinite { .. }
            | Error::EmptyVector
            | Error::InvalidExponent { .. }
            | Error::InvalidWeight
            | Error::DegenerateGenerators { .. }
            | Error::InvalidOperator
            | Error::InvalidSamplerConfig { .. } => ErrorClass::Malformed,
            Error::DimensionMismatch { .. } => ErrorClass::DimensionMismatch,
            Error::ZeroVector
            | Error::DependentPencil
            | Error::AlphaInsideInterval { .. }
            | Error::SingularOperator
            | Error::SamplerExhausted { .. } => ErrorClass::Precondition,
            Error::BracketingFailed { .. }
            | Error::IntegrandPole { .. }
            | Error::DualNormLp { .. } => ErrorClass::Internal,
        }
    }
}
