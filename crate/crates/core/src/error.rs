use thiserror::Error;

use crate::lang::LangError;
use crate::monoid::MonoidError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Lang(#[from] LangError),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error("letter images do not generate the target monoid")]
    NotSurjective,
    #[error("monoid of size {size} exceeds the enumeration cap {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("class expression error at byte {offset}: {message}")]
    ClassSyntax { offset: usize, message: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("semiring law violated: {0}")]
    Semiring(String),
}

pub type Result<T> = std::result::Result<T, Error>;
