use std::path::PathBuf;

/// Errors raised by the solver, projectors and experiment driver.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("matrix is not positive definite (pivot {pivot} = {value:e}); try larger penalty constants")]
    NotSpd { pivot: usize, value: f64 },

    #[error("unsupported mesh: {0}")]
    UnsupportedMesh(String),

    #[error("unknown case `{0}`")]
    UnknownCase(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::PreconditionViolated(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
