use thiserror::Error;

use crate::dataset::SampleId;

/// Errors raised by the selection toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("sample id {id} out of range for a dataset of {size} samples")]
    InvalidId { id: usize, size: usize },

    #[error("distance function returned {value} for ({from}, {to}); distances must be finite and non-negative")]
    ContractViolation {
        from: SampleId,
        to: SampleId,
        value: f64,
    },

    #[error("representative set is empty")]
    EmptySet,

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("no legal cover exists at delta = {delta}: sample {sample} is farther than delta from every candidate")]
    NoCover { delta: f64, sample: SampleId },

    #[error("the selected set leaves sample {sample} at distance {distance} > delta = {delta} (a representative whose self-distance exceeds delta)")]
    Uncovered {
        delta: f64,
        sample: SampleId,
        distance: f64,
    },

    #[error("instance of {size} samples exceeds the exhaustive-search cap of {cap}")]
    TooLarge { size: usize, cap: usize },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: u64,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
