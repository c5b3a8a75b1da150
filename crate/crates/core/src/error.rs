use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("input is not homogeneous for the requested grading")]
    NonHomogeneousInput,
    #[error("filtration mismatch: {0}")]
    FiltrationMismatch(String),
    #[error("derivation is not logarithmic for factor {0}")]
    NotLogarithmicForFactor(usize),
    #[error("divisor is not free")]
    NotFree,
    #[error("divisor is not Koszul free")]
    NotKoszulFree,
    #[error("bracket is not in the span of the basis")]
    StructureConstantFailure,
    #[error("functional equation witness could not be extracted: {0}")]
    WitnessExtractionFailed(String),
    #[error("not a linear form: {0}")]
    NotLinear(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
