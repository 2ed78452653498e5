use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid election: {0}")]
    InvalidElection(String),

    #[error("invalid price function for voter {voter}: {reason}")]
    InvalidPrices { voter: usize, reason: String },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("shift action has {got} entries but the election has {expected} voters")]
    ActionLength { expected: usize, got: usize },

    #[error("voter {voter} cannot shift the preferred candidate by {shift} (at most {max})")]
    InvalidShift { voter: usize, shift: usize, max: usize },

    #[error("search space of size {size} exceeds the budget of {budget}")]
    BudgetExceeded { size: u128, budget: u128 },

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("no successful shift action of finite cost exists")]
    NoFiniteSolution,

    #[error("invalid reduction input: {0}")]
    InvalidReductionInput(String),

    #[error("{0}")]
    Syntax(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
