use thiserror::Error;

use crate::basesets::{BaseSetsFailure, ProcessFailure};
use crate::gamma::GammaReport;
use crate::split_search::SplitSearchResult;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("universe mismatch: expected {expected} elements, found {found}")]
    UniverseMismatch { expected: usize, found: usize },

    #[error("label {label} is outside the universe 0..{n}")]
    LabelOutOfRange { label: usize, n: usize },

    #[error("universe must contain at least one element")]
    EmptyUniverse,

    #[error("duplicate member {0}")]
    DuplicateMember(String),

    #[error("member {set} has cardinality {card}, above the bound {bound}")]
    CardinalityExceeded { set: String, card: usize, bound: usize },

    #[error("{what}: budget of {limit} exceeded ({hint})")]
    BudgetExceeded {
        what: &'static str,
        limit: u64,
        hint: &'static str,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid split: {0}")]
    InvalidSplit(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("gamma condition fails; witness {}", .0.witness_string())]
    GammaViolated(Box<GammaReport>),

    #[error("no split meeting the bound within {trials} trials (best retained {})", .best.retained.len())]
    TrialsExhausted {
        trials: u64,
        best: Box<SplitSearchResult>,
    },

    #[error("base-set input condition violated: {0}")]
    InputCondition(String),

    #[error("base-set guarantee violated: {}", .0.reason)]
    GuaranteeViolated(Box<BaseSetsFailure>),

    #[error("process stopped at step {}: {}", .0.steps.len() + 1, .0.source)]
    Process(Box<ProcessFailure>),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        match self {
            Error::BudgetExceeded { .. } => true,
            Error::Process(failure) => failure.source.is_budget(),
            _ => false,
        }
    }
}
