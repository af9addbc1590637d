use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("undeclared variable `{0}`")]
    UndeclaredVariable(String),
    #[error("syntax error at column {col}: {msg}")]
    Syntax { col: usize, msg: String },
    #[error("`i` used but the field is q")]
    ImaginaryInQ,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("curve is not on the variety: {0}")]
    NotOnVariety(String),
}

pub type Result<T> = std::result::Result<T, Error>;
