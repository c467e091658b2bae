//! The constraint language: AST, concrete syntax, free-variable analysis
//! and the ground evaluator used as the independent soundness oracle.

pub mod ast;
pub mod eval;
mod lexer;
mod parser;

pub use ast::{Assignment, BinOp, CmpOp, Expr, Pred};
pub use eval::{evaluate, evaluate_with_hints, EvalError};
pub use parser::{parse, SyntaxError};
