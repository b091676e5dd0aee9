use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid state: s = {s}, r = {r} (both must be positive)")]
    InvalidState { s: f64, r: f64 },

    #[error("innovation covariance is singular")]
    SingularUpdate,

    #[error("fusion weights sum to zero")]
    DegenerateWeights,

    #[error("appearance feature unavailable")]
    FeatureUnavailable,

    #[error("malformed head: {0}")]
    MalformedHead(String),

    #[error("invalid tensor: {0}")]
    InvalidTensor(String),

    #[error("evaluation input: {0}")]
    EvaluationInput(String),

    #[error("latency report needs at least one frame")]
    EmptyReport,

    #[error("config: {0}")]
    Config(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
