use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("elements belong to different group versions ({0} vs {1})")]
    VersionMismatch(String, String),
    #[error("invalid group parameters: {0}")]
    InvalidParams(String),
    #[error("rank {0} is outside [0, p^6)")]
    RankOutOfRange(String),
    #[error("coordinate {0} is not reduced modulo p")]
    CoordinateOutOfRange(u64),
    #[error("group version `{0}` has no digest format")]
    NoDigestSupport(String),
    #[error("non-canonical digest: {0}")]
    NonCanonical(String),
    #[error("invalid symbol {symbol:?} at position {position}")]
    InvalidSymbol { symbol: char, position: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("input of {len} characters exceeds the limit of {max}")]
    TooLong { len: usize, max: usize },
    #[error("reserved element theta({0}) does not exist (at most 63 are defined)")]
    ThetaExhausted(usize),
    #[error("invalid removal token or key: {0}")]
    InvalidToken(String),
    #[error("element is not a valid function identifier (class {0})")]
    NotAFunction(String),
    #[error("element is not a commuting value identifier (class {0})")]
    NotAValue(String),
    #[error("invalid output arity {0}")]
    InvalidArity(usize),
    #[error("invalid position {position} for a tuple of {len} values")]
    BadPosition { position: usize, len: usize },
    #[error("no value named {0:?}")]
    UnknownName(String),
    #[error("tuple removal by identity or index is disabled for this state")]
    RemovalDisabled,
    #[error("refusing census for p = {0}: too large to enumerate")]
    RefusedSize(u64),
    #[error("digest {0} not found in store")]
    NotFound(String),
    #[error("digest {0} already stores different content")]
    ContentConflict(String),
    #[error("alias rejected: {0}")]
    AliasRejected(String),
    #[error("malformed plan: {0}")]
    MalformedPlan(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
