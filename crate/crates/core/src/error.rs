use thiserror::Error;

/// Failures raised by the exact and numeric layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole: {0}")]
    Pole(String),

    #[error("series is not invertible: constant coefficient is zero")]
    NotInvertible,

    #[error("insufficient decay: term ratio stayed >= 0.999 for {terms} consecutive terms")]
    InsufficientDecay { terms: usize },

    #[error("precision budget exceeded: {0}")]
    PrecisionBudget(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("identity `{id}` does not support {mode} mode")]
    UnsupportedMode { id: String, mode: String },

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("cannot parse number `{0}`")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
