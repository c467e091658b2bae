//! Constraint solving for quantified integer constraints over bounded and
//! unbounded domains, with sound three-valued verdicts.
//!
//! Classical finite-domain solvers answer Sat or Unsat; over unbounded
//! domains "no solution found" is often not a refutation. This crate tracks,
//! per quantifier scope, whether enumeration was exhaustive, and classifies
//! the outcome as Sat, Unsat or Unknown-with-reason so that no verdict
//! overclaims.
//!
//! The pieces:
//! - [`lang`]: the predicate language (parser, AST, ground evaluator)
//! - [`domain`]: interval domains with infinite bounds and interval
//!   arithmetic
//! - [`engine`]: bounds propagation, goal compilation and labeling search
//! - [`scope`]: enumeration-scope bookkeeping and verdict classification
//! - [`enumerate`]: value-selection strategies and universal sweeps
//! - [`feistel`]: keyed format-preserving permutations for random
//!   enumeration without memory
//! - [`rules`]: committed-choice transitive closure of difference
//!   constraints, refuting cyclic inequalities without enumeration
//! - [`cli`]: the command-line front end
//!
//! ```
//! use infdom::engine::{solve, SolverConfig};
//! use infdom::lang::parse;
//! use infdom::scope::SolveResult;
//!
//! let p = parse("x > 10000 & x mod 1234 = 1").unwrap();
//! match solve(&p, &SolverConfig::default()).unwrap() {
//!     SolveResult::Sat { witness, .. } => assert_eq!(witness["x"], 11107),
//!     other => panic!("expected Sat, got {other:?}"),
//! }
//! ```

pub mod cli;
pub mod domain;
pub mod engine;
pub mod enumerate;
pub mod feistel;
pub mod lang;
pub mod rules;
pub mod scope;
