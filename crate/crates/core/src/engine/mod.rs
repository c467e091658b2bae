//! Propagator network, polarity-aware compilation and the labeling search.
//!
//! Solving proceeds in phases: constraint setup, existential enumeration,
//! then universal checks once every existentially quantified variable is
//! ground. Every Sat witness is re-validated by the ground evaluator before
//! being reported.

mod compile;
mod net;
mod search;

pub use compile::{nnf, subst, Goal, UniversalSpec};
pub use net::{CellId, Network, PropOutcome, Propagator, VarCell};
pub use search::{solve, solve_all, AllSolutions, SolverConfig};

use thiserror::Error;

/// Well-definedness and internal failures. Overflowing candidate values are
/// not errors: they are rejected during search and can never appear in a
/// witness.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("internal solver invariant violated: {0}")]
    Internal(String),
}
