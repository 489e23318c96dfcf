use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("enumeration of {requested} elements exceeds the cap of {cap}")]
    EnumerationTooLarge { requested: u128, cap: u64 },

    #[error("search budget of {budget} nodes exceeded")]
    SearchBudgetExceeded { budget: u64 },

    #[error("row {row} is out of range 1..={rows}")]
    RowOutOfRange { row: usize, rows: usize },

    #[error("not a solution: {0}")]
    NotASolution(String),

    #[error("variable g{0} appears in no row")]
    VariableUnused(usize),

    #[error("generator images for g{j} and g{l} do not commute (residual {residual:e})")]
    NonCommutingFactors { j: usize, l: usize, residual: f64 },

    #[error("invariant violated: {check} (residual {residual:e})")]
    InvariantViolation { check: String, residual: f64 },

    #[error("image of {generator} is not unitary (residual {residual:e})")]
    UnitarityViolation { generator: String, residual: f64 },

    #[error("image of J is not omega times the identity (residual {residual:e})")]
    JNotIdentified { residual: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown example `{0}`")]
    UnknownExample(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
