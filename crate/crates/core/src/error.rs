use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    /// A malformed line in one of the TSV / JSON-lines files.
    #[error("{}:{line}: {message}", path.display())]
    Format {
        path: PathBuf,
        line: usize,
        message: String,
    },

    /// Invalid configuration or mismatched stage inputs.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid value: {0}")]
    Invalid(String),

    #[error("no surface statistics for profiled document {0:?}")]
    MissingStats(String),

    #[error("pair references unknown document {0:?}")]
    DanglingDocument(String),

    #[error("duplicate pair {0:?}")]
    DuplicatePair(String),

    #[error("synthetic generation failed: {0}")]
    Generation(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            line,
            message: message.into(),
        }
    }

    /// True for errors caused by bad invocation or configuration rather than
    /// a failure while processing data.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_))
            || matches!(
                self,
                Error::Io { source, .. }
                    if matches!(source.kind(), io::ErrorKind::NotFound | io::ErrorKind::PermissionDenied)
            )
    }
}
