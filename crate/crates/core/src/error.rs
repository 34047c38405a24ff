use thiserror::Error;

/// Error categories. The CLI prints `error[<category>]: <message>` and maps
/// each category to a stable exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{0}")]
    Capacity(String),

    #[error("{0}")]
    Shape(String),

    #[error("{0}")]
    Infeasible(String),

    #[error("{0}")]
    Verification(String),

    #[error("{0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    /// Stable prefix used in CLI diagnostics.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::Capacity(_) => "capacity",
            Error::Shape(_) => "shape",
            Error::Infeasible(_) => "infeasible",
            Error::Verification(_) => "verification",
            Error::InvalidArgument(_) => "argument",
            Error::Io(_) => "io",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } => 2,
            Error::Capacity(_) => 3,
            Error::Infeasible(_) => 4,
            Error::Verification(_) => 5,
            Error::Shape(_) | Error::InvalidArgument(_) => 6,
            Error::Io(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
