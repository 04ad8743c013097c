use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid group spec `{0}`")]
    InvalidGroupSpec(String),
    #[error("unknown subgroup token `{token}`; available: {available}")]
    UnknownSubgroup { token: String, available: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("size guard: {what} is {size}, limit {limit}")]
    SizeGuard { what: String, size: u128, limit: u128 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("group closure exceeded cap of {0} elements")]
    CapExceeded(usize),
    #[error("not covered by the classification: {0}")]
    Unclassified(String),
    #[error("unknown hyperplane index {0}")]
    UnknownHyperplane(usize),
    #[error("malformed data: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
