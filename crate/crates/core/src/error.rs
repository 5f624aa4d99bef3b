use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("group parameter k must be positive, got {0}")]
    GroupParameter(u32),

    #[error("empty product")]
    EmptySequence,

    #[error("malformed element token {0:?}")]
    Token(String),

    #[error("exponent in {token:?} out of range for k={k}")]
    ExponentRange { token: String, k: u32 },

    #[error("magic squares of side {0} do not exist (need side > 2)")]
    UnsupportedSide(usize),

    #[error(
        "no construction for m={0}: side 2m={side} needs m >= 3 \
         (odd sides are impossible, side 2 has no semi-magic square, side 4 is search-only)",
        side = 2 * .0
    )]
    ConstructionGap(usize),

    #[error("invalid base square: {0}")]
    InvalidBase(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("index {index} out of range for line of length {len}")]
    BadIndex { index: usize, len: usize },

    #[error("line length {0} exceeds the limit of 8 for arbitrary orderings")]
    LineTooLong(usize),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
