//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The game document is not valid JSON. Position comes from the parser.
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    /// A decision node references an infoset id that was never declared.
    #[error("node `{path}` references unknown infoset `{infoset}`")]
    DanglingInfoset { infoset: String, path: String },

    /// Terminal payoff vector length differs from the player count.
    #[error("terminal `{path}` has {got} payoffs, expected {expected}")]
    PayoffArity {
        path: String,
        got: usize,
        expected: usize,
    },

    /// Chance probabilities must be nonnegative and sum to 1 within 1e-12.
    #[error("chance node `{path}` has probabilities summing to {sum} (expected 1)")]
    ChanceProbSum { path: String, sum: f64 },

    #[error("chance node `{path}` has negative probability for action `{action}`")]
    NegativeChanceProb { path: String, action: String },

    #[error("node `{path}`: children {{{got}}} do not match actions {{{expected}}}")]
    ChildActionMismatch {
        path: String,
        got: String,
        expected: String,
    },

    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("game violates perfect recall: {0}")]
    ImperfectRecall(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Conversion to a mixed profile requires a strictly positive plan.
    #[error("realization plan entry `{label}` = {value} is not strictly positive")]
    NotInterior { label: String, value: f64 },

    #[error("reduced normal form too large: {size} profiles exceed cap {cap}")]
    NormalFormTooLarge { size: u128, cap: u128 },

    #[error("equilibrium enumeration supports at most {max} players, got {got}")]
    TooManyPlayers { got: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("generator limit exceeded: {0}")]
    GeneratorLimit(String),

    #[error("homotopy start point residual {residual:e} exceeds 1e-10")]
    BadStartPoint { residual: f64 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}
