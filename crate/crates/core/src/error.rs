use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("row {row}: {message}")]
    Csv { row: u64, message: String },

    #[error("non-uniform time base at row {row}: step {step} deviates from median step {median}")]
    NonUniformTime { row: u64, step: f64, median: f64 },

    #[error("no samples in input")]
    EmptySignal,

    #[error("event file line {line}: {message}")]
    EventFormat { line: usize, message: String },

    #[error("unsupported event file version {0}")]
    UnknownVersion(String),

    #[error("event header field `{0}` missing")]
    MissingHeader(&'static str),

    #[error("corrupt event stream: {0}")]
    CorruptStream(String),

    #[error("no anchors to reconstruct from")]
    NoAnchors,

    #[error("length mismatch: original has {original} samples, other has {other}")]
    LengthMismatch { original: usize, other: usize },

    #[error("sample rate mismatch: {original} Hz vs {other} Hz")]
    RateMismatch { original: f64, other: f64 },

    #[error("compression factor undefined for zero events")]
    ZeroEvents,
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
