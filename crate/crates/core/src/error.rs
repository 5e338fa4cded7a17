use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero input")]
    ZeroInput,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` still occurs in the polynomial")]
    VariableInUse(String),
    #[error("exponent vector has length {got}, expected {expected}")]
    ExponentLength { expected: usize, got: usize },
    #[error("coefficient division by {0} is not exact")]
    NotDivisible(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("polynomial is not univariate: {0}")]
    NotUnivariate(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("invalid special Groebner basis: {0}")]
    InvalidBasis(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("time budget exhausted: {0}")]
    BudgetExceeded(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
