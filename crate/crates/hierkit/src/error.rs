//! Crate-wide error type and exit-code mapping.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph is empty")]
    EmptyGraph,
    #[error("input graph is not connected")]
    DisconnectedInput,
    #[error("vector lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("negative leaf weight at node {0}")]
    NegativeLeafWeight(u32),
    #[error("unknown vertex {0}")]
    UnknownVertex(u32),
    #[error("instance too large for exact search: {0}")]
    TooLargeForExact(String),
    #[error("too few sites: need at least {need}, got {got}")]
    TooFewSites { need: usize, got: usize },
    #[error("primary node set is empty")]
    EmptyPrimarySet,
    #[error("no feasible solution: {0}")]
    Infeasible(String),
    #[error("epsilon must lie in (0, 1), got {0}")]
    InvalidEpsilon(String),
    #[error("unknown auxiliary problem kind {0}")]
    UnknownKind(String),
    #[error("internal node set fails domination check")]
    DominationViolation,
    #[error("composition space too large: {got} exceeds limit {limit}")]
    TooManyCombinations { got: u128, limit: u128 },
    #[error("cannot parse number {0:?}")]
    NumberSyntax(String),
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("invalid instance at {path}: {message}")]
    Validation { path: String, message: String },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn validation(path: impl Into<String>, message: impl Into<String>) -> Error {
        Error::Validation {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Process exit code contract: 0 success, 1 infeasible, 2 input error,
    /// 3 internal failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Infeasible(_) => 1,
            Error::EmptyGraph
            | Error::DisconnectedInput
            | Error::LengthMismatch(_, _)
            | Error::NegativeLeafWeight(_)
            | Error::UnknownVertex(_)
            | Error::TooLargeForExact(_)
            | Error::TooFewSites { .. }
            | Error::EmptyPrimarySet
            | Error::InvalidEpsilon(_)
            | Error::UnknownKind(_)
            | Error::DominationViolation
            | Error::TooManyCombinations { .. }
            | Error::NumberSyntax(_)
            | Error::Syntax(_)
            | Error::Validation { .. } => 2,
            Error::Io(_) => 3,
        }
    }
}
