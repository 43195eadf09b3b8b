use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ring specification: {0}")]
    RingSpec(String),
    #[error("ring axiom violated: {0}")]
    RingAxiom(String),
    #[error("ring mismatch between operands")]
    RingMismatch,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("search budget exhausted: {0}")]
    Budget(String),
    #[error("degree bound {bound} exceeded (degree {degree})")]
    DegreeOverflow { degree: usize, bound: usize },
    #[error("invariant breached: {0}")]
    Invariant(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
