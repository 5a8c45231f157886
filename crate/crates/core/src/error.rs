use alloc::string::String;

/// Errors produced by the coding, sharing, and analysis routines.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("index {index} is outside the code's range 1..={capacity}")]
    IndexOutOfRange { index: u64, capacity: u64 },

    #[error("decode error at bit offset {offset}: {reason}")]
    Decode {
        offset: usize,
        reason: DecodeFailure,
    },

    #[error("fixed pad of {available} bits cannot cover a {needed}-bit share")]
    PadExhausted { needed: usize, available: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

/// Why a bit stream failed to decode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum DecodeFailure {
    #[error("stream ends inside a codeword")]
    Truncated,
    #[error("codeword index does not fit in 64 bits")]
    Overflow,
    #[error("bits match no codeword")]
    NoMatch,
    #[error("count limit reached with bits remaining")]
    LimitReached,
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
