use alloc::string::String;

use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(BigInt),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("|discriminant| {disc} exceeds the class group bound {bound}")]
    ClassGroupBound { disc: BigInt, bound: u64 },
    #[error("operation requires a real quadratic field")]
    ImaginaryField,
    #[error("element is zero")]
    ZeroElement,
    #[error("a prime factor exceeds 64 bits")]
    PrimeTooLarge,
    #[error("expected {expected} coordinates, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("all inputs are zero")]
    AllZero,
    #[error("index {0} out of range")]
    BadIndex(usize),
    #[error("unknown place {0}")]
    UnknownPlace(String),
    #[error("operation needs element arithmetic, unavailable for declared data")]
    DeclaredBackend,
    #[error("declared data incomplete: {0}")]
    Incomplete(String),
    #[error("not a conductor ideal (violating place {0})")]
    NotConductorIdeal(String),
    #[error("unsupported non-monogenic-conductor order")]
    UnsupportedShape,
    #[error("search bound {0} exhausted")]
    SearchBound(u64),
    #[error("the order is maximal")]
    MaximalOrder,
    #[error("orders are not comparable: {0}")]
    NotSuborder(String),
    #[error("cannot parse {0:?}")]
    Syntax(String),
    #[error("division by zero")]
    ZeroDenominator,
    #[error("conductor must be positive")]
    InvalidConductor,
    #[error("divisor is at the wrong level")]
    LevelMismatch,
    #[error(transparent)]
    Declared(#[from] crate::declared::DeclaredError),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}
