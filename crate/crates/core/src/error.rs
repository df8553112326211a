use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure classes surfaced by the toolkit.
///
/// The CLI maps [`Error::is_usage`], [`Error::is_io_boundary`] and the rest
/// onto distinct exit codes, so new variants must be classified there too.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed XML at line {line}: {message}")]
    Xml { line: usize, message: String },

    #[error("malformed JSON: {0}")]
    Json(String),

    #[error("{0}")]
    Structural(String),

    #[error("row {row}: {message}")]
    Row { row: usize, message: String },

    #[error("unknown column `{0}`")]
    UnknownColumn(String),

    #[error("line {line}: {message}")]
    Line { line: usize, message: String },

    #[error("budget of {budget} characters is smaller than the {header} character header")]
    BudgetTooSmall { budget: usize, header: usize },

    #[error("{0} abstraction is not truncatable")]
    NotTruncatable(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("transport error (status {status}): {message}")]
    Transport { status: u16, message: String },

    #[error("transport timed out after {0} s")]
    Timeout(u64),

    #[error("executor failed: {message}\n-- sql --\n{sql}")]
    Executor { sql: String, message: String },

    #[error("no SQL statement found in response")]
    NoSql,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    /// Errors caused by how the toolkit was called rather than by its inputs.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::NotTruncatable(_) | Error::InvalidArgument(_) | Error::BudgetTooSmall { .. }
        )
    }

    /// Errors raised at the LLM transport or SQL executor boundary.
    pub fn is_io_boundary(&self) -> bool {
        matches!(
            self,
            Error::Transport { .. } | Error::Timeout(_) | Error::Executor { .. } | Error::NoSql
        )
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        let row = err.position().map(|p| p.line() as usize).unwrap_or(0);
        Error::Row {
            row,
            message: err.to_string(),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Json(err.to_string())
    }
}
