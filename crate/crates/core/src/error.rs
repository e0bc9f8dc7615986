use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("truncation degree mismatch: N={0} vs N={1}")]
    TruncationMismatch(usize, usize),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("rank {rank} with degree {degree} exceeds the packed key capacity")]
    CapacityExceeded { rank: usize, degree: usize },
    #[error("invalid rank {0}: need at least 1")]
    InvalidRank(usize),
    #[error("invalid truncation degree {0}: need N >= 2")]
    InvalidTruncation(usize),
    #[error("series has zero constant term")]
    ZeroConstantTerm,
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("generator index {index} out of range 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("linear part is singular")]
    Singular,
    #[error("linear part is not unimodular (det = {0})")]
    NotUnimodular(String),
    #[error("map is not in IA: linear part differs from the identity")]
    NotIa,
    #[error("degree {degree} out of range (max {max})")]
    DegreeOutOfRange { degree: usize, max: usize },
    #[error("image of generator {0} is not in the augmentation ideal")]
    NotAugmented(usize),
    #[error("invalid Magnus expansion data: {0}")]
    InvalidExpansion(String),
    #[error("unknown generator library kind {0:?}")]
    UnknownKind(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("wrong group element kind: {0}")]
    WrongElementKind(String),
    #[error("missing component: {0}")]
    MissingComponent(String),
    #[error("tensor is not homogeneous")]
    NotHomogeneous,
    #[error("invalid json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
