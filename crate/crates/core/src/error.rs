use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("missing required column `{0}`")]
    MissingColumn(String),

    #[error("row {row}: {message}")]
    Parse { row: usize, message: String },

    #[error("duplicate id `{0}`")]
    DuplicateId(String),

    #[error("{what} out of range: {message}")]
    Range { what: String, message: String },

    #[error("unknown {field} category `{value}`")]
    UnknownCategory { field: String, value: String },

    #[error("degenerate column `{0}`: all values are equal or zero")]
    DegenerateColumn(String),

    #[error("degenerate matrix: {0}")]
    DegenerateMatrix(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("empty input: {0}")]
    Empty(String),

    #[error("single-class input: {0}")]
    SingleClass(String),

    #[error("reference value is zero at index {0}")]
    ZeroReference(usize),

    #[error("zero-norm vector: {0}")]
    ZeroNorm(String),

    #[error("reference vector is constant")]
    ConstantReference,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{} contract violation(s):\n  {}", .0.len(), .0.join("\n  "))]
    Contract(Vec<String>),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: {message}")]
    Format { context: String, message: String },

    #[error("{}: {source}", path.display())]
    InFile {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(context: impl Into<String>, message: impl ToString) -> Self {
        Error::Format {
            context: context.into(),
            message: message.to_string(),
        }
    }

    pub(crate) fn range(what: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Range {
            what: what.into(),
            message: message.into(),
        }
    }

    /// Attaches the file the error came from, unless it already names one.
    pub fn in_file(self, path: impl Into<PathBuf>) -> Self {
        match self {
            e @ (Error::Io { .. } | Error::InFile { .. }) => e,
            e => Error::InFile {
                path: path.into(),
                source: Box::new(e),
            },
        }
    }

    /// Process exit status for this error: 2 for I/O failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } => 2,
            Error::InFile { source, .. } => source.exit_code(),
            _ => 1,
        }
    }
}
