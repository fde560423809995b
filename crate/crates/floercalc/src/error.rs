use thiserror::Error;

use crate::cfk::CfkComplex;

/// A malformed input document: unknown names, bad idempotent tags, invalid JSON.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("schema error: {0}")]
pub struct SchemaError(pub String);

impl SchemaError {
    pub fn new(msg: impl Into<String>) -> Self {
        SchemaError(msg.into())
    }
}

impl From<serde_json::Error> for SchemaError {
    fn from(e: serde_json::Error) -> Self {
        SchemaError(e.to_string())
    }
}

/// Failures of the constructions and pairings (the "domain" failures).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error("complex is not simultaneously simplified: {0}")]
    NotSimplified(String),
    #[error(
        "no simultaneously simplified basis found within the search budget; best residual keeps {} arrows",
        .0.arrows.len()
    )]
    SimplificationFailed(Box<CfkComplex>),
    #[error("unsupported framing: {0}")]
    UnsupportedFraming(String),
    #[error("reduction did not terminate after {0} cancellations")]
    NonTermination(usize),
    #[error("module is not left-bounded: {0}")]
    NotLeftBounded(String),
    #[error("restriction is not a subcomplex: {0}")]
    NotSubcomplex(String),
    #[error("inconsistent grading: {0}")]
    InconsistentGrading(String),
    #[error("placement conflict: {0}")]
    PlacementConflict(String),
    #[error("extra edges cannot be absorbed by a change of basis: {0}")]
    NotAbsorbable(String),
    #[error("illegal substitution: {0}")]
    IllegalSubstitution(String),
}

pub type Result<T> = std::result::Result<T, Error>;
