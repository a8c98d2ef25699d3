use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid box: {0}")]
    InvalidBox(String),

    #[error("invalid mask: {0}")]
    InvalidMask(String),

    #[error("dimension mismatch: {left_height}x{left_width} vs {right_height}x{right_width}")]
    DimensionMismatch {
        left_height: usize,
        left_width: usize,
        right_height: usize,
        right_width: usize,
    },

    #[error("affine transform is not invertible (determinant {0})")]
    NonInvertible(f64),

    #[error("invalid run-length encoding: {0}")]
    InvalidRle(String),

    #[error("invalid PBM data: {0}")]
    InvalidPbm(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("missing attribute record for query {0}")]
    MissingAttributes(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid spec key `{key}`: {message}")]
    SpecKey { key: String, message: String },

    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn spec_key(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::SpecKey {
            key: key.into(),
            message: message.into(),
        }
    }
}
