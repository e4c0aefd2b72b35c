use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A channel set too small to form a single pair.
    #[error("at least 2 channels are required, got {0}")]
    TooFewChannels(usize),

    /// Inputs whose shapes do not line up (missing pairs, length mismatch, ...).
    #[error("structural error: {0}")]
    Structural(String),

    /// A parameter outside its domain, or a required recall that is undefined.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// Not enough defined rows to correlate a measure.
    #[error("analysis error: measure {measure}: {reason}")]
    Analysis { measure: String, reason: String },

    #[error("selection error: {0}")]
    Selection(String),
}

pub type Result<T> = std::result::Result<T, Error>;
