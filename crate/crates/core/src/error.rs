use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not positive definite: pivot {pivot} is {value:e}")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("unknown builtin `{name}` (catalog: {catalog})")]
    UnknownBuiltin { name: String, catalog: String },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("point {point} is outside the domain (required boundary margin {margin:e})")]
    OutsideDomain { point: String, margin: f64 },

    #[error("metric is degenerate at {point}")]
    DegenerateMetric { point: String },

    #[error("direction vector is zero")]
    ZeroDirection,

    #[error("operation needs rank equal to dimension (rank {rank}, dimension {dim})")]
    RankMismatch { rank: usize, dim: usize },

    #[error("inconsistent jet: imaginary residue {residue:e} in R(xi, xi, xi, xi)")]
    InconsistentJet { residue: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no positive-definite random field after {0} attempts")]
    RetryBudget(usize),
}

/// Syntax error with a 1-based source position.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
            expected: Vec::new(),
        }
    }

    pub fn expecting(mut self, expected: &[&str]) -> Self {
        self.expected = expected.iter().map(|s| s.to_string()).collect();
        self
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at line {}, column {}: {}",
            self.line, self.column, self.message
        )?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}
