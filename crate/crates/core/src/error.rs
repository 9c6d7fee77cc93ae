use crate::scalar::ScalarError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    /// Input violates a documented precondition (wrong genus, ν₀ = 0, …).
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// The curve has a repeated root.
    #[error("multiple root: resultant of the curve polynomial and its derivative vanishes")]
    MultipleRoot,
    /// The divisor sits on a locus where the construction degenerates.
    #[error("degenerate divisor: {0}")]
    Degenerate(String),
    /// A constant needs a square root that the exact field cannot represent.
    #[error("exact mode cannot represent {0}; rerun with --mode numeric")]
    NotRepresentable(String),
    /// An exact division left a remainder; signals an arithmetic bug.
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
