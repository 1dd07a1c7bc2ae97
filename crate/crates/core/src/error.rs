use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("disconnected triple ({0}, {1}, {2})")]
    DisconnectedTriple(usize, usize, usize),

    #[error("metric space is disconnected")]
    Disconnected,

    #[error("empty metric space")]
    EmptySpace,

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid action: {0}")]
    InvalidAction(String),

    #[error("action is not isometric: {0}")]
    NotIsometric(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("point {index} out of range for a space of {len} points")]
    OutOfRange { index: usize, len: usize },

    #[error("region has {0} candidate points; exact capacity is limited to 64")]
    RegionTooLarge(usize),

    #[error("insufficient window: {0}")]
    InsufficientWindow(String),

    #[error("missing small-cancellation constant `{0}`; supply it in the constants file (see HYPCONE_CONSTANTS)")]
    MissingConstant(&'static str),

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("word is trivial: {0}")]
    TrivialWord(&'static str),

    #[error("vertex mismatch: {0}")]
    VertexMismatch(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_index(index: usize, len: usize) -> Result<()> {
    if index < len {
        Ok(())
    } else {
        Err(Error::OutOfRange { index, len })
    }
}
