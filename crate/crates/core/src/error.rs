use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} must be nonzero")]
    Zero(&'static str),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("gcd({a}, {b}) = {gcd} is not 1")]
    NotCoprime { a: u64, b: u64, gcd: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A table-backed function was asked for a prime power it does not cover.
    #[error("no value for prime power {q}^{e} in `{function}`")]
    Coverage { function: String, q: u64, e: u32 },

    /// An evaluation error raised while scanning index `n` of a progression.
    #[error("at n = {n}: {source}")]
    AtIndex {
        n: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn at_index(self, n: u64) -> Self {
        match self {
            e @ Error::AtIndex { .. } => e,
            e => Error::AtIndex { n, source: Box::new(e) },
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }
}
