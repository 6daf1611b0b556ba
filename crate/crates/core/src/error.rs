use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which resource guard stopped a search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Budget {
    Nodes,
    Time,
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Budget::Nodes => f.write_str("node"),
            Budget::Time => f.write_str("time"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid subset {subset:?} for n={n}, r={r}: {reason}")]
    InvalidSubset {
        subset: Vec<usize>,
        n: usize,
        r: usize,
        reason: &'static str,
    },

    #[error("rank {rank} out of range: C({n},{r}) = {limit}")]
    RankOutOfRange {
        rank: u64,
        n: usize,
        r: usize,
        limit: u64,
    },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A search stopped before completing. The partial count is a lower
    /// bound only and must never be reported as a result.
    #[error("{budget} budget exceeded after {nodes} nodes (partial count {partial})")]
    BudgetExceeded {
        budget: Budget,
        nodes: u64,
        partial: u128,
    },

    #[error("search aborted by visitor")]
    Aborted,
}

impl Error {
    pub(crate) fn params(msg: impl Into<String>) -> Self {
        Error::InvalidParameters(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
