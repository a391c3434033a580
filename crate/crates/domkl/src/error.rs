use thiserror::Error;

/// Errors produced by kernel construction, learner updates, the
/// simulation engine, and data ingestion.
#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value is out of range or inconsistent.
    #[error("config: {0}")]
    Config(String),

    /// An input violates a dimensional or structural precondition.
    #[error("input: {0}")]
    Input(String),

    /// Learners exchanged malformed or missing state.
    #[error("protocol: {0}")]
    Protocol(String),

    /// A numeric result left the finite range.
    #[error("numeric: {0}")]
    Numeric(String),

    /// The iterative solver did not reach the requested tolerance.
    #[error("no convergence after {iterations} iterations (gradient norm {gradient_norm:.3e})")]
    NonConvergence {
        iterations: usize,
        gradient_norm: f64,
    },

    /// A data file could not be parsed into a usable dataset.
    #[error("ingestion: {0}")]
    Ingestion(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    /// An error raised during a simulation round, tagged with the
    /// zero-based round index.
    #[error("round {round}: {source}")]
    AtRound {
        round: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Wraps `self` with the round index at which it occurred.
    pub fn at_round(self, round: usize) -> Error {
        Error::AtRound {
            round,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
