use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("modulus is reducible over the prime field")]
    ReducibleModulus,
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("field {p}^{n} exceeds the supported size")]
    FieldTooLarge { p: u64, n: u32 },
    #[error("element belongs to a different field")]
    FieldMismatch,
    #[error("arity mismatch: expected {expected} variables, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("empty generator list")]
    EmptyGenerators,
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("polynomial is not symmetric")]
    NotSymmetric,
    #[error("polynomial is constant; degree at least 1 is required")]
    ConstantPolynomial,
    #[error("vertex list contains a repeated vertex")]
    DuplicateVertex,
    #[error("work of {needed} exceeds budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial is not admissible")]
    NotAdmissible,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Fails with [`Error::BudgetExceeded`] when `needed > budget`.
pub(crate) fn check_budget(needed: u128, budget: u64) -> Result<()> {
    if needed > budget as u128 {
        Err(Error::BudgetExceeded { needed, budget: budget as u128 })
    } else {
        Ok(())
    }
}
