use std::fmt;

/// A malformed input, with the 1-based line it was found on when known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
    pub line: Option<usize>,
}

impl ParseError {
    pub fn new(message: impl Into<String>) -> Self {
        ParseError { message: message.into(), line: None }
    }

    pub fn at(line: usize, message: impl Into<String>) -> Self {
        ParseError { message: message.into(), line: Some(line) }
    }

    pub fn with_line(mut self, line: usize) -> Self {
        self.line.get_or_insert(line);
        self
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("structural error: {0}")]
    Structure(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("parameter out of range: {0}")]
    Range(String),
    #[error("ill-conditioned input: {0}")]
    IllConditioned(String),
    #[error("path leaves Sp* at s = {at}: det(I - A) = {det:e}")]
    Crossing { at: f64, det: f64 },
    #[error("filtration not respected by the differential: {0}")]
    Filtration(String),
    #[error("perturbation series did not terminate after {0} iterations")]
    NotNilpotent(usize),
    #[error(transparent)]
    Division(#[from] crate::scalars::DivisionByZero),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
