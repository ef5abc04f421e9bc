use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("operation requires at least one input vector")]
    EmptyInput,

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("index {index} out of range for {len} nodes")]
    Index { index: usize, len: usize },

    #[error("label {label} out of range for {classes} classes")]
    Label { label: usize, classes: usize },

    #[error("binary mode requested but feature matrix contains non-binary value {value} at row {row}")]
    Mode { row: usize, value: f32 },

    #[error("not found: {}", .0.display())]
    NotFound(PathBuf),

    #[error("corrupt dataset: {0}")]
    CorruptDataset(String),

    #[error("{}:{line}: {msg}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("infeasible split: {0}")]
    InfeasibleSplit(String),

    #[error("corrupt split: {0}")]
    CorruptSplit(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Coarse failure classes, used by the CLI to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Data,
    Internal,
}

impl Error {
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Config(_) | Error::Mode { .. } => ErrorClass::Config,
            Error::NotFound(_)
            | Error::CorruptDataset(_)
            | Error::Parse { .. }
            | Error::Malformed(_)
            | Error::InfeasibleSplit(_)
            | Error::CorruptSplit(_)
            | Error::Io(_)
            | Error::Json(_) => ErrorClass::Data,
            Error::Dimension { .. }
            | Error::EmptyInput
            | Error::Index { .. }
            | Error::Label { .. } => ErrorClass::Internal,
            Error::Context { source, .. } => source.class(),
        }
    }

    /// Process exit code for this error: 2 config, 3 data, 4 internal.
    pub fn exit_code(&self) -> i32 {
        match self.class() {
            ErrorClass::Config => 2,
            ErrorClass::Data => 3,
            ErrorClass::Internal => 4,
        }
    }
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { expected, found })
    }
}
