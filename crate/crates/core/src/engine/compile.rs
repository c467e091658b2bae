//! Polarity-aware lowering of predicates into solvable goals.
//!
//! Negation is pushed inward: under negative polarity comparisons flip,
//! `exists` becomes a universal obligation and `forall` opens an
//! existential (counterexample) scope.

use crate::lang::ast::{Assignment, CmpOp, Expr, Pred};

/// A quantifier-scoped search goal in negation normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Goal {
    Lit(bool),
    Atom(CmpOp, Expr, Expr),
    Conj(Vec<Goal>),
    Disj(Vec<Goal>),
    /// existential scope: from `exists` (positive) or `not(forall(..))`
    Exists(String, Box<Goal>),
    /// universal obligation, checked per value after existential labeling
    Universal(UniversalSpec),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalSpec {
    pub var: String,
    /// positive predicate whose propagated domain over-approximates the
    /// values that can violate the obligation; `None` means the whole line
    pub sweep_guard: Option<Pred>,
    /// must hold for every value of the sweep domain
    pub check: Pred,
}

/// Compiles `p` (or its negation, for `positive = false`) to a [`Goal`].
pub fn nnf(p: &Pred, positive: bool) -> Goal {
    match p {
        Pred::True => Goal::Lit(positive),
        Pred::False => Goal::Lit(!positive),
        Pred::Cmp(op, l, r) => {
            let op = if positive { *op } else { op.negate() };
            Goal::Atom(op, l.clone(), r.clone())
        }
        Pred::In(v, lo, hi) => {
            let var = Expr::Var(v.clone());
            if positive {
                Goal::Conj(vec![
                    Goal::Atom(CmpOp::Ge, var.clone(), lo.clone()),
                    Goal::Atom(CmpOp::Le, var, hi.clone()),
                ])
            } else {
                Goal::Disj(vec![
                    Goal::Atom(CmpOp::Lt, var.clone(), lo.clone()),
                    Goal::Atom(CmpOp::Gt, var, hi.clone()),
                ])
            }
        }
        Pred::And(a, b) => {
            if positive {
                Goal::Conj(vec![nnf(a, true), nnf(b, true)])
            } else {
                Goal::Disj(vec![nnf(a, false), nnf(b, false)])
            }
        }
        Pred::Or(a, b) => {
            if positive {
                Goal::Disj(vec![nnf(a, true), nnf(b, true)])
            } else {
                Goal::Conj(vec![nnf(a, false), nnf(b, false)])
            }
        }
        Pred::Implies(a, b) => {
            if positive {
                Goal::Disj(vec![nnf(a, false), nnf(b, true)])
            } else {
                Goal::Conj(vec![nnf(a, true), nnf(b, false)])
            }
        }
        Pred::Iff(a, b) => {
            if positive {
                Goal::Conj(vec![
                    Goal::Disj(vec![nnf(a, false), nnf(b, true)]),
                    Goal::Disj(vec![nnf(b, false), nnf(a, true)]),
                ])
            } else {
                Goal::Disj(vec![
                    Goal::Conj(vec![nnf(a, true), nnf(b, false)]),
                    Goal::Conj(vec![nnf(b, true), nnf(a, false)]),
                ])
            }
        }
        Pred::Not(inner) => nnf(inner, !positive),
        Pred::Exists(v, body) => {
            if positive {
                Goal::Exists(v.clone(), Box::new(nnf(body, true)))
            } else {
                // no value may satisfy the body
                Goal::Universal(UniversalSpec {
                    var: v.clone(),
                    sweep_guard: Some((**body).clone()),
                    check: Pred::Not(body.clone()),
                })
            }
        }
        Pred::Forall(v, body) => {
            if positive {
                let sweep_guard = match &**body {
                    Pred::Implies(guard, _) => Some((**guard).clone()),
                    _ => None,
                };
                Goal::Universal(UniversalSpec {
                    var: v.clone(),
                    sweep_guard,
                    check: (**body).clone(),
                })
            } else {
                // counterexample search
                Goal::Exists(v.clone(), Box::new(nnf(body, false)))
            }
        }
    }
}

/// True when the goal is a plain conjunction of comparison atoms, i.e. can
/// be posted to a network without choice points or scopes.
pub fn conj_of_atoms(g: &Goal) -> bool {
    match g {
        Goal::Lit(_) | Goal::Atom(..) => true,
        Goal::Conj(gs) => gs.iter().all(conj_of_atoms),
        _ => false,
    }
}

fn subst_expr(e: &Expr, a: &Assignment) -> Expr {
    match e {
        Expr::Int(_) => e.clone(),
        Expr::Var(v) => match a.get(v) {
            Some(&k) => Expr::Int(k),
            None => e.clone(),
        },
        Expr::Neg(inner) => Expr::Neg(Box::new(subst_expr(inner, a))),
        Expr::Bin(op, l, r) => Expr::Bin(
            *op,
            Box::new(subst_expr(l, a)),
            Box::new(subst_expr(r, a)),
        ),
    }
}

/// Capture-avoiding substitution of ground values for free variables.
pub fn subst(p: &Pred, a: &Assignment) -> Pred {
    match p {
        Pred::True | Pred::False => p.clone(),
        Pred::Cmp(op, l, r) => Pred::Cmp(*op, subst_expr(l, a), subst_expr(r, a)),
        Pred::In(v, lo, hi) => {
            let lo = subst_expr(lo, a);
            let hi = subst_expr(hi, a);
            match a.get(v) {
                // the membership variable itself is ground: lower to bounds
                Some(&k) => Pred::And(
                    Box::new(Pred::Cmp(CmpOp::Ge, Expr::Int(k), lo)),
                    Box::new(Pred::Cmp(CmpOp::Le, Expr::Int(k), hi)),
                ),
                None => Pred::In(v.clone(), lo, hi),
            }
        }
        Pred::And(x, y) => Pred::And(Box::new(subst(x, a)), Box::new(subst(y, a))),
        Pred::Or(x, y) => Pred::Or(Box::new(subst(x, a)), Box::new(subst(y, a))),
        Pred::Implies(x, y) => Pred::Implies(Box::new(subst(x, a)), Box::new(subst(y, a))),
        Pred::Iff(x, y) => Pred::Iff(Box::new(subst(x, a)), Box::new(subst(y, a))),
        Pred::Not(x) => Pred::Not(Box::new(subst(x, a))),
        Pred::Exists(v, body) | Pred::Forall(v, body) => {
            let inner = if a.contains_key(v) {
                let mut shadowed = a.clone();
                shadowed.remove(v);
                subst(body, &shadowed)
            } else {
                subst(body, a)
            };
            match p {
                Pred::Exists(..) => Pred::Exists(v.clone(), Box::new(inner)),
                _ => Pred::Forall(v.clone(), Box::new(inner)),
            }
        }
    }
}
