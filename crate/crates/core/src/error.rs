use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("operation requires nonzero input")]
    ZeroInput,
    #[error("variable universes are incompatible: {0}")]
    UniverseMismatch(String),
    #[error("negative exponent on non-Laurent variable {0}")]
    NegativeExponent(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("substitution makes a denominator identically zero")]
    ZeroDenominator,
    #[error("polynomial is not symmetric per vertex block")]
    NotSymmetric,
    #[error("shuffle product denominator did not cancel: {0}")]
    PoleNotCancelled(String),
    #[error("lowest-degree candidate cancelled under symmetrization: {0}")]
    LowestPartCancelled(String),
    #[error("no kernel preimage within bounds {0}")]
    NotFoundWithinBounds(String),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("dimension vector must be supported at a single vertex")]
    MultiVertexTarget,
    #[error("flavor mismatch: expected {expected}, found {found}")]
    FlavorMismatch { expected: String, found: String },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
