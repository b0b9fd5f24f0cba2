use thiserror::Error;

use crate::interval::LatticeViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("generator {generator} is out of range for e={e}, n={n}")]
    GeneratorOutOfRange { generator: String, e: u32, n: usize },

    #[error("parameter mismatch: ({e1},{n1}) vs ({e2},{n2})")]
    ParamMismatch { e1: u32, n1: usize, e2: u32, n2: usize },

    #[error("invalid element: {0}")]
    InvalidElement(String),

    #[error("invalid token {token:?}: {reason}")]
    InvalidToken { token: String, reason: String },

    #[error("{what} needs {needed} items but the cap is {cap}")]
    CapExceeded { what: &'static str, needed: u128, cap: usize },

    #[error(transparent)]
    Lattice(#[from] LatticeViolation),

    /// A computed object contradicts a proven statement; always an implementation bug.
    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    #[error("{0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn cap(what: &'static str, needed: u128, cap: usize) -> Self {
        Error::CapExceeded { what, needed, cap }
    }
}
