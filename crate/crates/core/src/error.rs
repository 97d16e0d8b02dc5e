//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised by scalar, polynomial, algebra and analysis operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("element is not invertible")]
    NonInvertible,
    #[error("operands belong to different algebras")]
    AlgebraMismatch,
    #[error("unit vector is not a two-sided identity")]
    UnitNotIdentity,
    #[error("unit vector has no invertible coordinate")]
    UnitNotNormalized,
    #[error("map is not an anti-automorphism")]
    NotAntiAutomorphism,
    #[error("map is not of order two")]
    NotOrderTwo,
    #[error("involution is not scalar")]
    NotScalarInvolution,
    #[error("form is degenerate")]
    DegenerateForm,
    #[error("2 is not invertible in the base ring")]
    TwoNotInvertible,
    #[error("operation requires a field base ring")]
    FieldRequired,
    #[error("vectors do not span a subalgebra")]
    NotASubalgebra,
    #[error("form restricted to the subalgebra is degenerate")]
    DegenerateRestriction,
    #[error("algebra is not a composition algebra")]
    NotComposition,
    #[error("{0}")]
    InvalidInput(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
