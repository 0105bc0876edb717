use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("operands live over different rings")]
    RingMismatch,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("map is not well defined: {0}")]
    IllDefined(String),
    #[error("differential does not square to zero")]
    NotSquareZero,
    #[error("map does not intertwine the differentials")]
    NotIntertwining,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unknown proposition id `{0}`")]
    UnknownProp(String),
}

impl Error {
    /// True for malformed input, as opposed to well-formed input that fails
    /// a mathematical precondition.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::UnknownProp(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
