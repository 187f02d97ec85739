use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("entropy {0} bits outside [0, 1]")]
    EntropyOutOfRange(f64),

    #[error("empty coordinate subset")]
    EmptyCoordinateSet,

    #[error("coordinate {index} out of range for a distribution with {arity} coordinates")]
    CoordinateOutOfRange { index: usize, arity: usize },

    #[error("coordinate projections requested on a scalar distribution")]
    ScalarProjection,

    #[error("support size {size} too small: {reason}")]
    SupportTooSmall { size: usize, reason: &'static str },

    #[error("support size {size} exceeds the limit of {limit} for {what}")]
    SupportTooLarge {
        size: usize,
        limit: usize,
        what: &'static str,
    },

    #[error("partition index {index} out of range (family has {len})")]
    PartitionOutOfRange { index: usize, len: usize },

    #[error("entropy values are not consistent with any distribution: {0}")]
    NonEntropic(String),

    #[error("ambiguous reconstruction: {0}")]
    Ambiguous(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid ground set: {0}")]
    InvalidGroundSet(String),

    #[error("invalid constraint: {0}")]
    InvalidConstraint(String),

    #[error("LP solver failure: {0}")]
    Numerical(String),

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("structurally infeasible: {0}")]
    StructurallyInfeasible(String),

    #[error("invalid auxiliary specification: {0}")]
    InvalidAux(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
