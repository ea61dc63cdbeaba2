use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("hypergeometric series does not terminate: no upper parameter is a nonpositive integer")]
    NonTerminating,

    #[error("lower parameter {parameter} vanishes at term {term}, before the series terminates")]
    LowerParameterPole { parameter: String, term: u64 },

    #[error("division by the zero rational function")]
    DivisionByZero,

    #[error("pole at t = {0}")]
    Pole(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("interpolation nodes are not distinct")]
    DuplicateNodes,

    #[error("series diverges: {0}")]
    Divergent(String),

    #[error("cannot parse {0:?} as a rational number")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
