use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the detection pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid functional sample: {0}")]
    InvalidSample(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("scatter matrix of the current subset is singular")]
    SingularScatter,

    #[error(
        "degenerate data: {0} of {1} points coincide, so no h-subset has a nonsingular scatter \
         (are all frames or curves identical?)"
    )]
    DegenerateData(usize, usize),

    #[error("method requires univariate curves (p = 1), got p = {0}; embed channels as a single variate first")]
    RequiresUnivariate(usize),

    #[error("too few observations: {0}")]
    InsufficientData(String),

    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("truth vector has only one class; AUC is undefined")]
    DegenerateTruth,

    #[error("malformed range on line {line}: {text:?}")]
    MalformedRange { line: usize, text: String },

    #[error("range {start}-{end} is outside 1..={total}")]
    OutOfBounds { start: usize, end: usize, total: usize },

    #[error("missing frame {index} in {dir}")]
    MissingFrame { dir: PathBuf, index: u64 },

    #[error("corrupt file {path}: {reason}")]
    CorruptFile { path: PathBuf, reason: String },

    #[error("bad magic: expected \"FDAR\", found {0:?}")]
    BadMagic([u8; 4]),

    #[error("unsupported FDAR version {0} (expected 1)")]
    VersionMismatch(u32),

    #[error("truncated FDAR file: header promises {expected} bytes, found {found}")]
    TruncatedFile { expected: u64, found: u64 },

    #[error("detection result carries no MS-Plot points")]
    NoPoints,

    #[error("video {video}: {cause}")]
    Video {
        video: String,
        cause: Box<Error>,
    },

    #[error("{context}: {cause}")]
    Io {
        context: String,
        cause: std::io::Error,
    },

    #[error("{context}: {cause}")]
    Json {
        context: String,
        cause: serde_json::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Attach the name of the video being processed.
    pub fn in_video(self, video: impl Into<String>) -> Self {
        Error::Video {
            video: video.into(),
            cause: Box::new(self),
        }
    }

    /// The innermost error, below any video context.
    pub fn root(&self) -> &Error {
        match self {
            Error::Video { cause, .. } => cause.root(),
            other => other,
        }
    }

    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            cause: source,
        }
    }

    pub(crate) fn json(context: impl Into<String>, source: serde_json::Error) -> Self {
        Error::Json {
            context: context.into(),
            cause: source,
        }
    }
}
