use thiserror::Error;

/// Errors produced by the exact-arithmetic kernels and certificate runners.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a squarefree negative integer")]
    InvalidField(i64),

    #[error("mixed quadratic fields Q(sqrt({0})) and Q(sqrt({1}))")]
    FieldMismatch(i64, i64),

    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("singular matrix: {0}")]
    SingularMatrix(String),

    #[error("no splitting: cyclotomic polynomial of order {d} is irreducible over Q(sqrt({field}))")]
    NoSplitting { d: u64, field: i64 },

    #[error("no suitable field for d = {0}; use c_min instead")]
    UseCMin(u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown claim: {0}")]
    UnknownClaim(String),

    #[error("non-torsion boundary element: {0}")]
    NonTorsion(String),

    #[error("element is not in {group}: {reason}")]
    NotInGroup { group: &'static str, reason: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
