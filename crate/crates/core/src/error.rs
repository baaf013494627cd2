use thiserror::Error;

use crate::projective::Ray;
use crate::tensor::Condition;

/// Errors raised across the library.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("entry count {found} does not match {rows}x{cols}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        found: usize,
    },

    #[error("vector norm is below tolerance")]
    ZeroVector,

    #[error("empty input")]
    EmptyInput,

    #[error("invalid tolerances: eq_tol={eq_tol}, rank_tol={rank_tol}")]
    InvalidTolerance { eq_tol: f64, rank_tol: f64 },

    #[error("matrix has numerical column rank {rank} < {cols}")]
    RankDeficient { rank: usize, cols: usize },

    #[error("tabulated domain rays {first} and {second} coincide")]
    DuplicateRay { first: usize, second: usize },

    #[error("ray is not in the oracle table")]
    NotInTable,

    #[error("map is not probability preserving: deviation {deviation:.3e} at pair ({}, {})", pair.0, pair.1)]
    NotProbabilityPreserving {
        deviation: f64,
        pair: Box<(Ray, Ray)>,
    },

    #[error("conjugation behaviour at basis index {index} disagrees with index 1")]
    InconsistentTau { index: usize },

    #[error("relative phase at basis index {index} has modulus {modulus}, expected 1")]
    NonUnimodularK { index: usize, modulus: f64 },

    #[error("linear and antilinear lifts are indistinguishable in dimension 1")]
    AmbiguousTau,

    #[error("lift disagrees with the oracle on validation queries (residual {residual:.3e})")]
    ValidationFailed { residual: f64 },

    #[error("precondition failed: {0}")]
    PreconditionFailed(Condition),

    #[error("invalid plan: {0}")]
    InvalidPlan(String),

    #[error("unknown proposition `{0}`")]
    UnknownProposition(String),

    #[error("decode error: {0}")]
    Decode(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Variant name, stable across releases.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::ZeroDimension => "ZeroDimension",
            Error::ShapeMismatch { .. } => "ShapeMismatch",
            Error::ZeroVector => "ZeroVector",
            Error::EmptyInput => "EmptyInput",
            Error::InvalidTolerance { .. } => "InvalidTolerance",
            Error::RankDeficient { .. } => "RankDeficient",
            Error::DuplicateRay { .. } => "DuplicateRay",
            Error::NotInTable => "NotInTable",
            Error::NotProbabilityPreserving { .. } => "NotProbabilityPreserving",
            Error::InconsistentTau { .. } => "InconsistentTau",
            Error::NonUnimodularK { .. } => "NonUnimodularK",
            Error::AmbiguousTau => "AmbiguousTau",
            Error::ValidationFailed { .. } => "ValidationFailed",
            Error::PreconditionFailed(_) => "PreconditionFailed",
            Error::InvalidPlan(_) => "InvalidPlan",
            Error::UnknownProposition(_) => "UnknownProposition",
            Error::Decode(_) => "Decode",
        }
    }

    /// Malformed or incomplete input, as opposed to a failed check.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::DimensionMismatch { .. }
                | Error::ZeroDimension
                | Error::ShapeMismatch { .. }
                | Error::ZeroVector
                | Error::EmptyInput
                | Error::InvalidTolerance { .. }
                | Error::RankDeficient { .. }
                | Error::DuplicateRay { .. }
                | Error::NotInTable
                | Error::InvalidPlan(_)
                | Error::UnknownProposition(_)
                | Error::Decode(_)
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Decode(e.to_string())
    }
}
