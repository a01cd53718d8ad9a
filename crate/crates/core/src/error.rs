use thiserror::Error;

/// Errors produced by the election model, rules, checkers, parsers and harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid election: {0}")]
    InvalidElection(String),
    #[error("invalid arrival order: {0}")]
    InvalidOrder(String),
    #[error("invalid committee: {0}")]
    InvalidCommittee(String),
    #[error("empty domain: {0}")]
    EmptyDomain(String),
    #[error("instance too large: {what} exceeds the cap of {cap}")]
    TooLarge { what: String, cap: u64 },
    #[error("wrong ballot type: {0}")]
    WrongBallotType(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}
