use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator vanishes at u = {u_value} mod {modulus}")]
    DenominatorVanishes { modulus: u64, u_value: u64 },
    #[error("invalid prime specification: {0}")]
    InvalidPrimeSpec(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("grading basis has determinant {0}, expected +1 or -1")]
    BadDeterminant(i64),
    #[error("parity mismatch: {0}")]
    ParityMismatch(String),
    #[error("element is not in the domain of the map: {0}")]
    NotInDomain(String),
    #[error("invalid module data: {0}")]
    InvalidModule(String),
    #[error("value outside the supplied window: {0}")]
    OutsideWindow(String),
    #[error("grade or depth violation: {0}")]
    DepthViolation(String),
    #[error("inconsistent module state: {0}")]
    Inconsistent(String),
    #[error("submodule check failed: {0}")]
    SubmoduleRejected(String),
    #[error("config error at line {line}, key `{key}`: {message}")]
    Config {
        line: usize,
        key: String,
        message: String,
    },
    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
