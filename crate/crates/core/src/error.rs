use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("division by zero in F_q")]
    DivisionByZero,
    #[error("division by zero polynomial")]
    ZeroPolynomialDivision,
    #[error("insufficient precision to invert")]
    InsufficientPrecision,
    #[error("no integer part available")]
    NoPolynomialPart,
    #[error("enumeration budget exceeded: degree {degree} needs {needed} terms, budget is {budget}")]
    BudgetExceeded {
        degree: u32,
        needed: u128,
        budget: u64,
    },
    #[error("logarithm series diverges for input of valuation {valuation}")]
    NonconvergentLog { valuation: i64 },
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
