use std::io;

use thiserror::Error;

/// Errors produced by the counting routines, table I/O, and input parsing.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The direct formula would enumerate more index tuples than allowed.
    #[error(
        "direct formula needs {needed} enumeration steps, over the budget of {budget}; \
         build a residue table (`build-table`) and query it instead"
    )]
    BudgetExceeded { needed: String, budget: u64 },

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("internal invariant violated: {0}")]
    Logic(String),

    #[error("parse error at {context}: {message}")]
    Parse { context: String, message: String },

    #[error("invalid table: {0}")]
    Validation(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
