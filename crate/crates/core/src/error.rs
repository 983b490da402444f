use thiserror::Error;

/// Errors raised by the library.
///
/// `Defect` marks a state that the algorithms guarantee cannot happen; seeing
/// one means the implementation (not the input) is wrong.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("internal defect: {0}")]
    Defect(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn defect(msg: impl Into<String>) -> Self {
        Error::Defect(msg.into())
    }

    pub fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}
