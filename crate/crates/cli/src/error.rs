use thiserror::Error;

/// Process exit codes. Stable; scripts depend on them.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 2;
    pub const NOT_EQUAL: i32 = 3;
    pub const SELFTEST: i32 = 4;
    pub const IO: i32 = 5;
    pub const FORMAT: i32 = 6;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("product check failed: {0}")]
    NotEqual(String),
    #[error("selftest failed: {0}")]
    Selftest(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Format { path: String, message: String },
    #[error(transparent)]
    Compute(#[from] skewmm::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Compute(_) => exit::USAGE,
            CliError::NotEqual(_) => exit::NOT_EQUAL,
            CliError::Selftest(_) => exit::SELFTEST,
            CliError::Io { .. } => exit::IO,
            CliError::Format { .. } => exit::FORMAT,
        }
    }

    pub(crate) fn io(path: impl std::fmt::Display, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_string(),
            source,
        }
    }
}
