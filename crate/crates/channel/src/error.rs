use thiserror::Error;

pub type Result<T, E = ChannelError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("stream closed")]
    Eof,
    #[error("malformed frame: {0}")]
    Malformed(String),
    #[error("unexpected {got} frame, wanted {want}")]
    Unexpected { got: String, want: String },
    #[error("parameter mismatch: {0}")]
    ParamsMismatch(String),
    #[error("peer sent alert: {0}")]
    Alert(String),
    #[error("record authentication failed")]
    AuthFailure,
    #[error("record counter {got} replayed or reordered (expected at least {expected})")]
    ReplayError { got: u64, expected: u64 },
    #[error("session is not established")]
    NotEstablished,
    #[error(transparent)]
    Crypto(#[from] qsafe_core::Error),
}
