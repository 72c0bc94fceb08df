use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at column {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("family mismatch: expected {expected}, found {found}")]
    FamilyMismatch { expected: String, found: String },

    #[error("{inner} is not contained in {outer}")]
    NotContained { outer: String, inner: String },

    #[error("subgroup {0} is not compact and open")]
    NotCompactOpen(String),

    #[error("limit subgroup of {subgroup} under {element} undetermined after {steps} steps")]
    Undetermined { element: String, subgroup: String, steps: usize },

    #[error("scale of {element} uncertified: raw minimum {raw_min} attained by no tidy candidate")]
    Uncertified { element: String, raw_min: String },

    #[error("no witness for {element} with n <= {n_max}")]
    NoWitness { element: String, n_max: u32 },

    #[error("no conjugator found for y = {y}, x = {x}")]
    NoConjugator { y: String, x: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }

    /// Undetermined and uncertified computations are reported apart from
    /// ordinary failures.
    pub fn is_undetermined(&self) -> bool {
        matches!(self, Error::Undetermined { .. } | Error::Uncertified { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
