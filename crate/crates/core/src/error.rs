use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("field error: {0}")]
    Field(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("variable mismatch: {0:?} vs {1:?}")]
    VariableMismatch(Vec<String>, Vec<String>),
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("substitution image for {0:?} has a nonzero constant term")]
    ConstantTerm(String),
    #[error("not a parameter system: {0}")]
    NotParameterSystem(String),
    #[error("precision too small: need {needed}, have {available}")]
    Precision { needed: u32, available: u32 },
    #[error("operation needs an exact polynomial, got a series truncated at degree {0}")]
    NotExact(u32),
    #[error("fixed-point iteration did not converge within {0} steps")]
    NonConvergence(u32),
    #[error("singular intersection matrix")]
    SingularMatrix,
    #[error("lattice error: {0}")]
    Lattice(String),
    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
