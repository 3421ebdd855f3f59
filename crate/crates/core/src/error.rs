use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid distribution: {0}")]
    InvalidSpec(String),

    #[error("invalid weight sequence: {0}")]
    InvalidWeights(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    /// A cost guard refused the request; the message carries advice.
    #[error("refused: {0}")]
    Refused(String),

    #[error("invalid experiment: {0}")]
    InvalidExperiment(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
