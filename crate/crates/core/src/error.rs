use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("field of size {0} exceeds the supported maximum of 65536")]
    FieldTooLarge(u64),
    #[error("the zero form has no divisor")]
    ZeroForm,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("enumeration budget exceeded: {0}")]
    Budget(String),
    #[error("raw count {raw} is not divisible by {divisor}")]
    NotDivisible { raw: u128, divisor: u128 },
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
