use thiserror::Error;

/// Errors raised by the measure algebra, the identity catalog and the harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("space mismatch: {left} vs {right}")]
    SpaceMismatch { left: String, right: String },

    #[error("not absolutely continuous: atom {atom} has mass under the first measure only")]
    NotAbsolutelyContinuous { atom: usize },

    #[error("enumeration cap exceeded: {size} atoms > cap {cap}")]
    EnumerationCapExceeded { size: u128, cap: usize },

    #[error("alpha = {0} is outside (0, 1)")]
    AlphaOutOfRange(f64),

    #[error("log_sum_exp of an empty list")]
    EmptyList,

    #[error("measure has empty support")]
    EmptySupport,

    #[error("index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("conditional row {0} is undefined off the support of the conditioning marginal")]
    UndefinedRow(usize),

    #[error("unknown identity tag `{0}`")]
    UnknownIdentity(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
