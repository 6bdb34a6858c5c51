use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("value is not real")]
    NotReal,
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unsupported square root: {0}")]
    UnsupportedSqrt(String),
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("diagonal entry {0} is not 2")]
    BadDiagonal(usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("index {index} out of range for {len} strands")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid label: {0}")]
    InvalidLabel(String),
    #[error("matrix is singular")]
    Singular,
    #[error("graph is not a tree")]
    NotATree,
    #[error("invalid cap: {0}")]
    InvalidCap(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
