use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid arrangement: {0}")]
    Arrangement(String),
    #[error("unsupported Coxeter type: {0}")]
    Unsupported(String),
    #[error("multiplicity is not quasi-constant: max - min = {0}")]
    NotQuasiConstant(u32),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("algebra error: {0}")]
    Algebra(String),
    /// A mathematical postcondition failed; indicates a bug.
    #[error("internal check failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
