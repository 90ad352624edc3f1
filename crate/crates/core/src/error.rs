use thiserror::Error;

/// Errors raised by the analysis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Two particles closer than the contact distance; the sticky-disc energy is infinite.
    #[error("particles {i} and {j} overlap: distance {distance} < epsilon {epsilon}")]
    Overlap {
        i: usize,
        j: usize,
        distance: f64,
        epsilon: f64,
    },

    #[error("bond graph is not planar: {0}")]
    NonPlanar(String),

    /// An identity or oracle check failed. Signals a bug, not bad input.
    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Process exit code: 2 for bad input, 3 for internal consistency failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Consistency(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
