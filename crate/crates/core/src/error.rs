use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is singular")]
    Singular,

    #[error("datum does not satisfy the ADHM equation [A,B] + IJ = 0")]
    NotSolution,

    #[error("datum is not stable")]
    NotStable,

    #[error("field {field}: expected shape {expected_rows}x{expected_cols}, found {found}")]
    Shape {
        field: String,
        expected_rows: usize,
        expected_cols: usize,
        found: String,
    },

    #[error("missing field {0}")]
    MissingField(String),

    #[error("field {field}: malformed rational {text:?}")]
    MalformedRational { field: String, text: String },

    #[error("field {field}: {message}")]
    InvalidField { field: String, message: String },

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("sampler gave up after {0} draws")]
    SamplerExhausted(usize),

    #[error("twist {n} exceeds the configured cap {cap}")]
    TwistTooLarge { n: i64, cap: i64 },

    #[error("inconsistent result: {0}")]
    Inconsistent(String),

    #[error("malformed document: {0}")]
    Document(String),
}

pub type Result<T> = std::result::Result<T, Error>;
