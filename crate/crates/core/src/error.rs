use thiserror::Error;

pub type Result<T> = std::result::Result<T, HceError>;

#[derive(Debug, Error)]
pub enum HceError {
    /// Malformed or inconsistent component configuration.
    #[error("invalid component config: {0}")]
    Config(String),

    /// A data row could not be parsed or validated. `line` is 1-based and
    /// counts the header as line 1.
    #[error("line {line}: {message}")]
    Row { line: usize, message: String },

    /// Arguments outside an operation's domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The analysis itself is undefined on this data (e.g. an empty arm).
    #[error("degenerate analysis: {0}")]
    Degenerate(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl HceError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        HceError::InvalidInput(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        HceError::Degenerate(msg.into())
    }

    /// True for errors caused by bad input rather than by the data's shape.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, HceError::Degenerate(_))
    }
}
