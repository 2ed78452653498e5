//! Exact and approximate solvers for Shift-Bribery under positional scoring
//! rules, a brute-force reference solver, and instance generators for
//! Copeland hardness reductions.
//!
//! All arithmetic is exact. Scores and prices are [`Rational`]s and the LP
//! solver in [`lp`] is generic over any exact ordered field; the aliases at
//! the crate root fix it to arbitrary-precision rationals.

pub mod borda;
pub mod election;
pub mod error;
pub mod hardness;
pub mod io;
pub mod lp;
pub mod oracle;
pub mod pricing;
pub mod random;
pub mod report;
pub mod scalar;
pub mod scoring_ptas;

pub use election::{
    apply_shift, copeland_scores, is_winner, pairwise_margins, positional_scores, scores, winners,
    Candidate, Election, PairwiseMatrix, Rule, ScoreTable, ShiftAction,
};
pub use error::{Error, Result};
pub use pricing::{classify_prices, cost, is_successful, psi_max, width, Instance, PriceFamily, PriceFunction};
pub use scalar::{Extended, Scalar};

/// Exact rational numbers used for scores, weights and prices.
pub type Rational = num_rational::BigRational;

/// A nonnegative price or the infinity sentinel.
pub type Price = Extended<Rational>;

pub type LinearProgram = lp::LinearProgram<Rational>;
pub type BasicSolution = lp::BasicSolution<Rational>;
pub type LpOutcome = lp::LpOutcome<Rational>;
