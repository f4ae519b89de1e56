use thiserror::Error;

/// Everything that can go wrong while configuring or running the optimizer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum FdoError {
    #[error("dimension mismatch: expected {expected} entries, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("inverted bounds in dimension {dimension}: lower {lower} is not below upper {upper}")]
    InvertedBounds {
        dimension: usize,
        lower: f64,
        upper: f64,
    },

    #[error("search space needs at least one dimension")]
    EmptySpace,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("random table exhausted after {draws} draws")]
    TableExhausted { draws: usize },

    #[error("objective returned a non-finite fitness ({value}) at {position:?}")]
    NonFiniteFitness { value: f64, position: Vec<f64> },

    #[error("the alternating initialization rule is only defined for two dimensions, got {0}")]
    PaperAlternatingRequiresTwoDims(usize),

    #[error("unknown objective `{0}`")]
    UnknownObjective(String),

    #[error("cannot summarize an empty batch")]
    EmptyBatch,

    #[error("trace best-history is not monotone at iteration {iteration}")]
    NonMonotoneHistory { iteration: usize },

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("i/o failure: {0}")]
    Io(String),
}

impl From<std::io::Error> for FdoError {
    fn from(err: std::io::Error) -> Self {
        FdoError::Io(err.to_string())
    }
}

impl From<csv::Error> for FdoError {
    fn from(err: csv::Error) -> Self {
        FdoError::Io(err.to_string())
    }
}

impl From<serde_json::Error> for FdoError {
    fn from(err: serde_json::Error) -> Self {
        FdoError::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, FdoError>;
