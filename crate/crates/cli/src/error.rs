use evoshare_core::Error as CoreError;

/// A failed command, split by exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags or argument values; exit status 1.
    #[error("{0}")]
    Usage(String),
    /// Bad input data, files, or IO; exit status 2.
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Decode { .. } | CoreError::PadExhausted { .. } => {
                CliError::Data(e.to_string())
            }
            CoreError::InvalidArgument(_)
            | CoreError::IndexOutOfRange { .. }
            | CoreError::Parse(_) => CliError::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}
