use cantorstab_core::Error as CoreError;

/// Process exit codes. Stable across versions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Ok = 0,
    VerificationFailed = 1,
    Usage = 2,
    SearchFailed = 3,
    BudgetExceeded = 4,
}

impl ExitCode {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("search failed: {0}")]
    Search(CoreError),
    #[error("{0}")]
    Core(CoreError),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Parse(_) | CliError::Schema(_) | CliError::Io { .. } => ExitCode::Usage,
            CliError::Search(_) => ExitCode::SearchFailed,
            CliError::Core(CoreError::BudgetExceeded) => ExitCode::BudgetExceeded,
            CliError::Core(CoreError::SearchExhausted(_) | CoreError::EmptyRist(_)) => ExitCode::SearchFailed,
            CliError::Core(_) => ExitCode::Usage,
        }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Schema(e.to_string())
    }
}
