use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("deformation parameters differ: {left} vs {right}")]
    ThetaMismatch { left: f64, right: f64 },

    #[error("mu1 must be nonzero")]
    ZeroMu1,

    #[error("degenerate constraint: {0}")]
    Degenerate(String),

    #[error("singular evaluation: {0}")]
    Singular(String),

    #[error("parameters lie in the broken phase: {0}")]
    BrokenPhase(String),

    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),

    #[error("monomial {0} is not supported by this representation")]
    UnsupportedMonomial(String),

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("bracket endpoints share the verdict {0}")]
    RejectedBracket(String),

    #[error("objective is not finite: {0}")]
    NonFinite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
