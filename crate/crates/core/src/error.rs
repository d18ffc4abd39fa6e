use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid tropical value {0}: NaN and +inf are not allowed")]
    InvalidValue(f64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),

    #[error("malformed model document: {0}")]
    Schema(String),

    #[error("probabilities sum to {0}")]
    ProbabilitySum(f64),

    #[error("invalid probability {value} for {what}")]
    InvalidProbability { what: String, value: f64 },

    #[error("transition support of the Markov chain is not strongly connected")]
    ReducibleChain,

    #[error("singular stationary system")]
    SingularSystem,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("node index {node} out of range for dimension {dim}")]
    NodeOutOfRange { node: usize, dim: usize },

    #[error("missing exponent for non-trivial component {0}")]
    MissingExponent(usize),

    /// `row` is 0-based; the message shows it 1-based like the model documents.
    #[error("row condition violated: atom {atom} has no finite entry on row {}", .row + 1)]
    RowCondition { atom: String, row: usize },

    #[error("unsupported law: {0}")]
    UnsupportedLaw(String),
}
