use std::path::PathBuf;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A caller-supplied parameter is outside its documented range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A requested point violates a positivity/feasibility constraint.
    #[error("infeasible point: {0}")]
    Infeasible(String),

    /// Rejection sampling ran out of its retry budget.
    #[error("sampling exhausted after {draws} draws: {context}")]
    SamplingExhausted { draws: u64, context: String },

    /// An input violates a function's contract (dimensions, Hermiticity, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// An experiment configuration is malformed or inconsistent.
    #[error("invalid config: {0}")]
    Config(String),

    /// Iterative training produced non-finite values.
    #[error("training diverged: {0}")]
    Diverged(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("{path}: malformed data: {message}")]
    Format { path: PathBuf, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn json(path: impl Into<PathBuf>, source: serde_json::Error) -> Self {
        Error::Json {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            message: message.into(),
        }
    }
}
