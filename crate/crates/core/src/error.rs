use thiserror::Error;

use crate::mdp::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    Invalid(ValidationReport),
    #[error("strategy has no choice at state {state} in mode {mode}")]
    UndefinedChoice { state: String, mode: String },
    #[error("runs can pass horizon {0} and the strategy has no default rule")]
    HorizonEscape(u32),
    #[error("model is not acyclic: cycle through {0}")]
    NotAcyclic(String),
    #[error("state {0} is not almost-surely winning")]
    NotAlmostSure(String),
    #[error("no state has positive value, the conditioned MDP is empty")]
    EmptyConditioned,
    #[error(
        "successor enumeration of {0} passed the branching cap {1} and the model does not declare finite branching"
    )]
    BranchCapExceeded(String, usize),
    #[error("infinite successor enumeration at {0}")]
    InfiniteBranch(String),
    #[error(
        "round {round}: bubble radius passed {radius} without meeting the progress bound (achieved p = {achieved})"
    )]
    RadiusExhausted { round: usize, radius: usize, achieved: String },
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invalid(_)
            | Error::UnknownFamily(_)
            | Error::BadParams(_)
            | Error::Parse(_)
            | Error::Json(_)
            | Error::Io(_) => 2,
            Error::CheckFailed(_) => 4,
            _ => 3,
        }
    }
}
