//! Error type shared across the library.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("modulus has degree {got}, expected {want}")]
    DegreeMismatch { got: usize, want: usize },

    #[error("modulus polynomial is reducible")]
    ReducibleModulus,

    #[error("modulus polynomial must be monic")]
    NonMonicModulus,

    #[error("element does not belong to the expected ring: {0}")]
    RingMismatch(String),

    #[error("no Tits endomorphism: {0}")]
    NoTitsEndomorphism(String),

    #[error("subfield membership is only defined for rational function fields")]
    NotARationalFunction,

    #[error("element is not invertible")]
    NotAUnit,

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("element is not in the group (no Weyl chamber accepts it)")]
    NotInGroup,

    #[error("division by zero")]
    DivisionByZero,

    #[error("non-integral divided power in exponential (structure constant bug)")]
    NonIntegralDividedPower,

    #[error("invalid descent datum: {0}")]
    InvalidDescentDatum(String),

    #[error("no twisted-field morphism exists: {0}")]
    NoFieldMorphism(String),

    #[error("unsupported root system type: {0}")]
    UnsupportedType(String),

    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),

    #[error("closure is not a group: {0}")]
    ClosureNotAGroup(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
