use thiserror::Error;

/// Errors produced anywhere in the crate.
///
/// The CLI maps these onto exit codes, see [`Error::exit_code`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    CompositeModulus(u64),
    #[error("size exceeded: {0}")]
    SizeExceeded(String),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("operation requires a prime field (extension degree 1)")]
    NotPrimeField,
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("bad congruence: {0}")]
    BadCongruence(String),
    #[error("connection set is empty")]
    EmptySet,
    #[error("wrong family: {0}")]
    WrongFamily(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code: 1 for configuration problems, 2 for size limits,
    /// 3 for failed checks.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SizeExceeded(_) => 2,
            Error::CheckFailed(_) => 3,
            _ => 1,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
