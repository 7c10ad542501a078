use thiserror::Error;

/// Library-wide error type. The CLI maps `Input` and `Format` to exit code 2
/// and `Budget` to exit code 3.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller violated an operation precondition (alphabet mismatch,
    /// unknown state or event, malformed construction input).
    #[error("{0}")]
    Input(String),

    /// A text input (automaton, mask) failed to parse. Lines are 1-based.
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },

    /// A bounded computation exceeded its resource budget.
    #[error("resource budget exceeded: {0}")]
    Budget(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn format(line: usize, msg: impl Into<String>) -> Self {
        Error::Format {
            line,
            msg: msg.into(),
        }
    }

    pub fn budget(msg: impl Into<String>) -> Self {
        Error::Budget(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
