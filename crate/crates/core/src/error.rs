use std::io;

use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: character {ch:?} already listed with code `{first}`, now `{second}`")]
    ConflictingCode {
        line: usize,
        ch: char,
        first: String,
        second: String,
    },

    #[error("unknown character {ch:?} at position {pos}")]
    UnknownCharacter { ch: char, pos: usize },

    #[error("token {token:?} at position {pos} mixes Chinese and non-Chinese characters")]
    MixedToken { token: String, pos: usize },

    #[error("malformed input at position {pos}: {reason}")]
    MalformedInput { pos: usize, reason: &'static str },

    #[error("cannot decode token {token:?}: {reason}")]
    Decode { token: String, reason: String },

    #[error("{what}: {left} vs {right} lines")]
    LengthMismatch {
        what: &'static str,
        left: usize,
        right: usize,
    },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
