//! Error taxonomy for the laboratory.
//!
//! Variants are grouped by *who can fix the problem*:
//! - [`Error::Resolution`]: the requested object cannot be represented on the
//!   requested grid (too coarse, band limit too high, window too large). Fix
//!   by changing the grid exponent or the scale parameters.
//! - [`Error::Parameter`]: a scalar parameter is outside its admissible range.
//! - [`Error::Construction`]: a build-time verification failed — the code ran
//!   but the constructed object does not satisfy a property it must have
//!   (for example a mollifier profile whose lower bound is not positive).
//! - [`Error::Config`]: a configuration file or CLI override is malformed.
//! - [`Error::Io`]: filesystem failures while persisting results.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes surfaced by the laboratory.
#[derive(Debug, Error)]
pub enum Error {
    /// The grid cannot resolve the requested object.
    #[error("resolution error: {0}")]
    Resolution(String),

    /// A parameter is outside its admissible range.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// A constructed object failed its build-time verification.
    #[error("construction error: {0}")]
    Construction(String),

    /// A configuration file or override is malformed.
    #[error("config error: {0}")]
    Config(String),

    /// Filesystem failure.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Shorthand constructor for [`Error::Resolution`].
    pub fn resolution(msg: impl Into<String>) -> Self {
        Error::Resolution(msg.into())
    }

    /// Shorthand constructor for [`Error::Parameter`].
    pub fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    /// Shorthand constructor for [`Error::Construction`].
    pub fn construction(msg: impl Into<String>) -> Self {
        Error::Construction(msg.into())
    }

    /// Shorthand constructor for [`Error::Config`].
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Process exit code this error maps to: validation problems exit 2,
    /// runtime problems exit 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Resolution(_) | Error::Parameter(_) | Error::Config(_) => 2,
            Error::Construction(_) | Error::Io(_) => 1,
        }
    }
}
