use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PrymError {
    #[error("degenerate lattice")]
    DegenerateLattice,
    #[error("inadmissible")]
    Inadmissible,
    #[error("internal consistency error: {0}")]
    Consistency(String),
    #[error("invalid prototype: {0}")]
    InvalidPrototype(String),
    #[error("invariant defined only for odd discriminants")]
    EvenDiscriminant,
    #[error("discriminant {0} is not a perfect square")]
    NonSquare(i64),
    #[error("direction not recognized as periodic within budget")]
    NotPeriodic,
    #[error("not an eigenform decomposition: {0}")]
    NotEigenform(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, PrymError>;
