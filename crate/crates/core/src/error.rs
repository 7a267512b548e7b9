use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("empty input: run-length encoding is undefined for the empty string")]
    EmptyInput,
    #[error("malformed token sequence: {0}")]
    MalformedSequence(String),
    #[error("token sequence is not in the image of the decomposition: {0}")]
    NotInImage(String),
    #[error("search too large: more than {limit} branches")]
    SearchTooLarge { limit: u64 },
    #[error("skeleton mismatch: {0}")]
    SkeletonMismatch(String),
    #[error("position {pos} out of range for string of length {len}")]
    PositionOutOfRange { pos: usize, len: usize },
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
