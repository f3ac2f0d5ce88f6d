use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid cyclotomic order: {0}")]
    InvalidOrder(String),

    #[error("cyclotomic order mismatch: {left} vs {right}")]
    OrderMismatch { left: u32, right: u32 },

    #[error("polynomial arity mismatch: {left} vs {right} variables")]
    ArityMismatch { left: usize, right: usize },

    #[error("exponent overflow in variable {var}")]
    ExponentOverflow { var: usize },

    #[error("lowest-degree component of the zero polynomial is undefined")]
    ZeroPolynomial,

    #[error("exponent {exponent:?} is not in the period lattice (q_{} does not divide its coordinate {})", .index + 1, .index + 1)]
    SupportNotInLattice { exponent: Vec<i64>, index: usize },

    #[error("coordinate {var} is zero but the polynomial has a pole there")]
    PoleAtZero { var: usize },

    #[error("point has {got} coordinates, expected {expected}")]
    PointDimension { expected: usize, got: usize },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("preset `{name}` does not support dimension {d}")]
    UnsupportedDimension { name: String, d: usize },

    #[error("symbolic budget exceeded: Q = {cells} > {budget}; use the numeric pipeline")]
    BudgetExceeded { cells: usize, budget: usize },

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("eigenvalue iteration did not converge: {0}")]
    NumericFailure(String),

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
