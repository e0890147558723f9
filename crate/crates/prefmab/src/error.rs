use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    /// One message per violated field, in field order.
    #[error("invalid configuration:\n{}", .0.join("\n"))]
    InvalidConfig(Vec<String>),

    #[error("failed to parse config: {0}")]
    ConfigParse(#[from] serde_json::Error),

    #[error("cannot read input file '{path}': {source}")]
    InputRead {
        path: String,
        source: std::io::Error,
    },

    #[error("{failed} of {total} trials failed; see summary.json")]
    TrialsFailed { failed: usize, total: usize },

    #[error("override path '{path}' does not match any config field")]
    UnknownOverridePath { path: String },

    #[error("override for '{path}' is not valid JSON or a bare scalar: {value}")]
    BadOverrideValue { path: String, value: String },

    #[error("unknown algorithm '{0}'")]
    UnknownAlgorithm(String),

    #[error("vector length mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("arm index {arm} out of range for {num_arms} arms")]
    InvalidArm { arm: usize, num_arms: usize },

    #[error("degenerate observation: reward vector has zero norm")]
    DegenerateObservation,

    #[error("empty availability set for user {user} at round {round}")]
    EmptyAvailability { user: usize, round: usize },

    #[error("arm {arm} selected outside the availability set of user {user}")]
    ArmNotAvailable { arm: usize, user: usize },

    #[error("invalid parameter {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("matrix is not positive definite (pivot {pivot} at column {col})")]
    NotPositiveDefinite { col: usize, pivot: f64 },

    #[error("rank-deficient least-squares system with {samples} samples in dimension {dim}")]
    RankDeficient { samples: usize, dim: usize },

    #[error("policy '{policy}' requires revealed preference feedback but none was provided")]
    MissingPreference { policy: String },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("malformed results row {row}: {reason}")]
    MalformedRow { row: usize, reason: String },

    #[error("thread pool setup failed: {0}")]
    Parallel(String),

    #[error("round {round}: {source}")]
    AtRound { round: usize, source: Box<Error> },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
