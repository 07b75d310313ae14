use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("inversion of zero")]
    ZeroInversion,
    #[error("support has dimension {found}, expected {expected}")]
    RankMismatch { expected: usize, found: usize },
    #[error("malformed encoding: {0}")]
    Decode(String),
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("duplicate evaluation point {0}")]
    DuplicatePoint(u8),
    #[error("{parties} parties need distinct nonzero points but F_{q} has only {} of them", q - 1)]
    TooManyParties { parties: usize, q: u16 },
    #[error("key pair does not match: {0}")]
    KeyMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
