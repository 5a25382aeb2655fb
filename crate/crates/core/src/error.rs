use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("function is not reversible")]
    NotReversible,
    #[error("width mismatch: expected {expected} bits, got {actual}")]
    WidthMismatch { expected: usize, actual: usize },
    #[error("line {line} out of range for width {width}")]
    LineOutOfRange { line: usize, width: usize },
    #[error("width {width} exceeds the supported maximum of {max}")]
    TooWide { width: usize, max: usize },
    #[error("value {value:#b} does not fit in {width} bits")]
    ValueOutOfRange { value: u32, width: usize },
    #[error("incomplete truth table: input {0:#b} has no row")]
    MissingRow(u32),
    #[error("duplicate row for input {0:#b}")]
    DuplicateRow(u32),
    #[error("invalid gate: {0}")]
    InvalidGate(String),
    #[error("gate {0} requires a rotation angle")]
    MissingParameter(&'static str),
    #[error("gate {0} takes no parameter")]
    UnexpectedParameter(&'static str),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),
    #[error("operator is not unitary")]
    NotUnitary,
    #[error("clock frequency must be positive")]
    ZeroFrequency,
    #[error("invalid parameter {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("inconsistent system profile: {0}")]
    InconsistentProfile(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
