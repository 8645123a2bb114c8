use thiserror::Error;

/// Errors produced by the library and the command-line front end.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        message: String,
        line: usize,
        column: usize,
    },
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("out of range: {0}")]
    Range(String),
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    #[error("refused: {what} needs an estimated {estimate} evaluations, ceiling is {ceiling}")]
    Refusal {
        what: String,
        estimate: u128,
        ceiling: u128,
    },
    #[error("no convergence after {iterations} iterations (best gap {gap:e})")]
    NonConvergence { iterations: usize, gap: f64 },
    #[error("objective returned {value} at point {point:?}")]
    Evaluation { point: Vec<f64>, value: f64 },
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// Process exit code for the error category.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Io { .. } => 2,
            Error::Validation(_)
            | Error::Domain(_)
            | Error::Range(_)
            | Error::UnsupportedShape(_) => 3,
            Error::Refusal { .. } => 4,
            Error::NonConvergence { .. } | Error::Evaluation { .. } | Error::Numerical(_) => 5,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
