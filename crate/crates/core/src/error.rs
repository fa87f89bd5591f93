use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("presentation ({a},{b}) is not definite: both a and b must be negative")]
    NotDefinite { a: i64, b: i64 },
    #[error("no modulus with the right-unit property exists for (D,N) = ({d},{n})")]
    NoModulus { d: u64, n: u64 },
    #[error("(D,N) = ({d},{n}) is not a class-number-one family")]
    ClassNumberNotOne { d: u64, n: u64 },
    #[error("{0} is not an element of the order")]
    NotInOrder(String),
    #[error("{0} is not primitive")]
    NotPrimitive(String),
    #[error("{0} is not primary")]
    NotPrimary(String),
    #[error("norm {norm} is not coprime to {modulus}")]
    NormNotCoprime { norm: String, modulus: String },
    #[error("norm {norm} is not a power of {p}")]
    NotPPower { norm: String, p: u64 },
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("p = {p} divides 2*D*N = {level}")]
    PrimeDividesLevel { p: u64, level: u64 },
    #[error("presentation not split at {p}: {a} is not a square mod {p}")]
    NotSplit { a: i64, p: u64 },
    #[error("denominator of {0} is divisible by p")]
    DenominatorNotUnit(String),
    #[error("degenerate reduction: trace of {0} vanishes mod p")]
    DegenerateReduction(String),
    #[error("not Schottky: {pure} pure generators present")]
    NotSchottky { pure: usize },
    #[error("inadmissible prime {p} for (D,N) = ({d},{n})")]
    Inadmissible { d: u64, n: u64, p: u64 },
    #[error("(D,N) = ({d},{n}) has no order_two term")]
    NoOrderTwoTerm { d: u64, n: u64 },
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub(crate) fn invariant<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invariant(msg.into()))
}
