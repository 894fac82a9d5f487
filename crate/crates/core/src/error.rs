use thiserror::Error;

/// Every failure the library can report. The variants line up with the
/// CLI exit codes (see [`Error::exit_code`]).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("rule {rule} not applicable at position {position}: {reason}")]
    RuleNotApplicable {
        rule: String,
        position: usize,
        reason: String,
    },

    #[error("word is not normalized (residual present)")]
    NotNormalized,

    #[error("integration failed near x = {near}: {msg}")]
    Integration { near: String, msg: String },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. }
            | Error::Input(_)
            | Error::InvalidParameter(_)
            | Error::RuleNotApplicable { .. }
            | Error::NotNormalized
            | Error::Io(_) => 2,
            Error::ResourceLimit(_) => 3,
            Error::Integration { .. } | Error::Numerical(_) => 5,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
