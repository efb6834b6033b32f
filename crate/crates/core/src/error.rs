use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph is not admissible: {0}")]
    Inadmissible(String),

    #[error("resource budget exceeded: {what} (limit {limit})")]
    Budget { what: &'static str, limit: u128 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }

    /// True for errors that signal an exhausted search or enumeration budget.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}
