use thiserror::Error;

pub type Result<T, E = StenoError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum StenoError {
    #[error("invalid time series: {0}")]
    InvalidSeries(String),

    #[error("invalid stroke: {0}")]
    InvalidStroke(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("series are not aligned: {0}")]
    Alignment(String),

    #[error("degenerate signal: {0}")]
    DegenerateSignal(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("out-of-order stimulus: {0}")]
    Sequencing(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("incomplete input: {0}")]
    IncompleteInput(String),

    #[error("unknown session `{0}`")]
    UnknownSession(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
