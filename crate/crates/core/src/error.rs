use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: String, modulus: String },
    #[error("{base} has no period modulo {modulus} (gcd != 1)")]
    NotPeriodic { base: String, modulus: String },
    #[error("no logarithm exists")]
    NoLogarithm,
    #[error("key generation failed: {0}")]
    KeyGen(String),
    #[error("cannot encode: {0}")]
    Encoding(String),
    #[error("cannot decode: {0}")]
    Decoding(String),
    #[error("block {block} is not below modulus {modulus}")]
    BlockTooLarge { block: u64, modulus: u64 },
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("parameter mismatch: {0}")]
    ParamMismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("message of {bits} bits exceeds capacity {capacity}")]
    MessageTooLong { bits: usize, capacity: usize },
    #[error("signing failed after {0} attempts")]
    SigningFailed(usize),
    #[error("gave up after {0} rounds")]
    GaveUp(usize),
    #[error("unknown scheme `{0}`")]
    UnknownScheme(String),
    #[error("scheme `{0}` is already registered")]
    DuplicateScheme(String),
    #[error("scheme `{id}` is not a {expected}")]
    KindMismatch { id: String, expected: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
