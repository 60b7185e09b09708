//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid input: dimension mismatch, bad exponent, malformed data.
    #[error("input error: {0}")]
    Input(String),
    /// A numerical invariant that should hold failed (contraction violated,
    /// iteration did not converge, ...). CLI maps this to exit code 3.
    #[error("numerical assertion failed: {0}")]
    Numerical(String),
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    pub fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
