use effdof_core::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: u64,
        column: usize,
        message: String,
    },

    #[error("invalid arguments: {0}")]
    Validation(String),

    #[error("degenerate components: {0}")]
    Degenerate(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn parse(line: u64, column: usize, message: impl Into<String>) -> Self {
        CliError::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }

    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } => 3,
            CliError::Validation(_) => 4,
            CliError::Degenerate(_) => 5,
            CliError::Io { .. } => 6,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::DegenerateComponents(msg) => CliError::Degenerate(msg),
            CoreError::AllZeroWeights => CliError::Degenerate("all weights are zero".into()),
            CoreError::InvalidInput(msg) => CliError::Validation(msg),
            e @ CoreError::LengthMismatch { .. } => CliError::Validation(e.to_string()),
        }
    }
}
