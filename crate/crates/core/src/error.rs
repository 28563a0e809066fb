use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("element out of range: {element} is not in 1..={degree}")]
    ElementOutOfRange { element: i64, degree: usize },
    #[error("duplicate subset {0:?}")]
    DuplicateSubset(Vec<usize>),
    #[error("not a partition: subset {0:?} is missing")]
    NotAPartition(Vec<usize>),
    #[error("degree {degree} exceeds the limit {limit}")]
    DegreeTooLarge { degree: usize, limit: usize },
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("unknown name {0:?}")]
    UnknownName(String),
    #[error("invalid split: {0}")]
    InvalidSplit(String),
    #[error("configuration too large: {vertices} vertices (limit {limit})")]
    TooLarge { vertices: usize, limit: usize },
    #[error("not sandwiched: {0}")]
    NotSandwiched(String),
    #[error("invalid vector partition: {0}")]
    InvalidVectorPartition(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Malformed(e.to_string())
    }
}
