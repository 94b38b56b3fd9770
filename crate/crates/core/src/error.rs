use std::fmt;

use serde::{Deserialize, Serialize};

/// Why a series was rejected during missing-data trimming.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectReason {
    InteriorMissing,
    TooMuchMissing,
    MultipleBlocks,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RejectReason::InteriorMissing => "interior_missing",
            RejectReason::TooMuchMissing => "too_much_missing",
            RejectReason::MultipleBlocks => "multiple_blocks",
        })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("input too short: need at least {needed} values, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("no convergence: {0}")]
    NoConvergence(&'static str),
    #[error("input contains non-finite values")]
    NotFinite,
    #[error("series rejected: {0}")]
    Rejected(RejectReason),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("every feature was removed by filtration")]
    EmptyResult,
    #[error("class `{0}` has no examples")]
    MissingClass(String),
    #[error("class `{class}` has {count} members, fewer than k = {k} folds")]
    ClassTooSmall { class: String, count: usize, k: usize },
    #[error("matrix has fewer than {requested} non-zero singular values ({found})")]
    RankDeficient { requested: usize, found: usize },
    #[error("degenerate: {0}")]
    Degenerate(String),
    #[error("catalog error: {0}")]
    Catalog(String),
}

impl Error {
    /// Upper-case code naming the error kind, stable across messages.
    pub fn code(&self) -> &'static str {
        match self {
            Error::TooShort { .. } => "TOO_SHORT",
            Error::DegenerateInput(_) => "DEGENERATE_INPUT",
            Error::NoConvergence(_) => "NO_CONVERGENCE",
            Error::NotFinite => "NOT_FINITE",
            Error::Rejected(_) => "REJECTED",
            Error::InvalidArgument(_) => "INVALID_ARGUMENT",
            Error::EmptyResult => "EMPTY_RESULT",
            Error::MissingClass(_) => "MISSING_CLASS",
            Error::ClassTooSmall { .. } => "CLASS_TOO_SMALL",
            Error::RankDeficient { .. } => "RANK_DEFICIENT",
            Error::Degenerate(_) => "DEGENERATE",
            Error::Catalog(_) => "CATALOG",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
