use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("coefficient {index} is not finite ({value})")]
    NonFiniteCoefficient { index: usize, value: f64 },

    #[error("invalid {name} = {value}: {reason}")]
    InvalidParameter { name: &'static str, value: String, reason: String },

    #[error("objective overflowed; coefficients are outside the plausible range")]
    Overflow,

    #[error("truncation N = {n} too small; at least {required} is needed")]
    TruncationTooSmall { n: usize, required: usize },

    #[error("line search failed at iteration {iteration} (objective {objective:e})")]
    LineSearchFailed { iteration: usize, objective: f64, iterate: Vec<f64> },

    #[error("cannot shrink a degree-{previous} solution to degree {requested}")]
    WarmStartShrink { previous: usize, requested: usize },

    #[error("weights sum to {0}; cannot renormalize")]
    DegenerateWeights(f64),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unsupported solution file header {0:?}")]
    UnsupportedVersion(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, value: impl ToString, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, value: value.to_string(), reason: reason.into() }
    }
}
