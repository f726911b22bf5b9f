use thiserror::Error;

/// Errors reported by the analytic engine, the solver and the CLI.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A model parameter violates its admissible range.
    #[error("invalid model parameter: {0}")]
    InvalidParams(String),

    /// Contract terms that the game formulation excludes.
    #[error("invalid contract terms: {0}")]
    InvalidTerms(String),

    /// An argument outside the domain of a function (pole, empty interval, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative procedure hit its iteration cap.
    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// A bracketing search found no sign change.
    #[error("bracket failure: {0}")]
    Bracket(String),

    /// Malformed or inconsistent configuration file.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
