use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// The CLI maps [`Error::Config`] to exit code 2 and everything else to
/// exit code 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("simulation diverged on path {path} at step {step} (value {value})")]
    NonFinitePath { path: usize, step: usize, value: f64 },

    #[error("empty selection: {0}")]
    EmptySelection(String),

    #[error("non-positive diffusion evaluation {value} at x = {x}")]
    NonPositiveDiffusion { x: f64, value: f64 },

    #[error("replicate {replicate} at N = {n_total} failed: {source}")]
    Replicate {
        n_total: usize,
        replicate: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("hypothesis selection stalled: kept {kept} of {wanted} members after {attempts} draws")]
    SelectionBudget {
        kept: usize,
        wanted: usize,
        attempts: usize,
    },

    #[error("malformed dataset file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_) | Error::Json(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
