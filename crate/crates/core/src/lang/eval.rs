use super::ast::{Assignment, BinOp, CmpOp, Expr, Pred};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("arithmetic overflow")]
    Overflow,
    #[error("quantifier over '{0}' cannot be bounded from its guard")]
    InfiniteQuantifier(String),
    #[error("unbound variable '{0}'")]
    UnboundVariable(String),
}

/// Classical two-valued evaluation of a predicate under a total assignment
/// of its free variables. Quantifiers must be boundable from their guards;
/// otherwise `InfiniteQuantifier` is reported.
pub fn evaluate(p: &Pred, a: &Assignment) -> Result<bool, EvalError> {
    let mut env = Env { base: a, stack: Vec::new(), hints: &[] };
    eval_pred(p, &mut env)
}

/// Like [`evaluate`], but existential quantifiers may additionally be
/// discharged by named witness hints (as produced by the solver) when their
/// guard does not bound the variable.
pub fn evaluate_with_hints(
    p: &Pred,
    a: &Assignment,
    hints: &[(String, i64)],
) -> Result<bool, EvalError> {
    let mut env = Env { base: a, stack: Vec::new(), hints };
    eval_pred(p, &mut env)
}

struct Env<'a> {
    base: &'a Assignment,
    stack: Vec<(String, i64)>,
    hints: &'a [(String, i64)],
}

impl Env<'_> {
    fn lookup(&self, name: &str) -> Result<i64, EvalError> {
        for (n, v) in self.stack.iter().rev() {
            if n == name {
                return Ok(*v);
            }
        }
        self.base
            .get(name)
            .copied()
            .ok_or_else(|| EvalError::UnboundVariable(name.to_string()))
    }
}

fn eval_expr(e: &Expr, env: &Env) -> Result<i64, EvalError> {
    match e {
        Expr::Int(v) => Ok(*v),
        Expr::Var(name) => env.lookup(name),
        Expr::Neg(inner) => eval_expr(inner, env)?.checked_neg().ok_or(EvalError::Overflow),
        Expr::Bin(op, l, r) => {
            let a = eval_expr(l, env)?;
            let b = eval_expr(r, env)?;
            match op {
                BinOp::Add => a.checked_add(b).ok_or(EvalError::Overflow),
                BinOp::Sub => a.checked_sub(b).ok_or(EvalError::Overflow),
                BinOp::Mul => a.checked_mul(b).ok_or(EvalError::Overflow),
                BinOp::Div => {
                    if b == 0 {
                        Err(EvalError::DivisionByZero)
                    } else {
                        a.checked_div(b).ok_or(EvalError::Overflow)
                    }
                }
                BinOp::Mod => euclid_mod(a, b),
            }
        }
    }
}

/// Euclidean remainder: result in `[0, |divisor|)`.
pub fn euclid_mod(a: i64, d: i64) -> Result<i64, EvalError> {
    if d == 0 {
        Err(EvalError::DivisionByZero)
    } else if d == -1 {
        Ok(0) // rem_euclid overflows on (i64::MIN, -1); remainder is 0
    } else {
        Ok(a.rem_euclid(d))
    }
}

fn eval_pred(p: &Pred, env: &mut Env) -> Result<bool, EvalError> {
    match p {
        Pred::True => Ok(true),
        Pred::False => Ok(false),
        Pred::Cmp(op, l, r) => {
            let a = eval_expr(l, env)?;
            let b = eval_expr(r, env)?;
            Ok(op.holds(a, b))
        }
        Pred::In(v, lo, hi) => {
            let x = env.lookup(v)?;
            let lo = eval_expr(lo, env)?;
            let hi = eval_expr(hi, env)?;
            Ok(lo <= x && x <= hi)
        }
        Pred::And(a, b) => Ok(eval_pred(a, env)? && eval_pred(b, env)?),
        Pred::Or(a, b) => Ok(eval_pred(a, env)? || eval_pred(b, env)?),
        Pred::Implies(a, b) => Ok(!eval_pred(a, env)? || eval_pred(b, env)?),
        Pred::Iff(a, b) => Ok(eval_pred(a, env)? == eval_pred(b, env)?),
        Pred::Not(inner) => Ok(!eval_pred(inner, env)?),
        Pred::Forall(v, body) => {
            // the range must cover every value for which the body could be
            // false; outside an implication guard's support the body holds
            let guard: &Pred = match body.as_ref() {
                Pred::Implies(g, _) => g,
                _ => {
                    return Err(EvalError::InfiniteQuantifier(v.clone()));
                }
            };
            let (lo, hi) = guard_range(guard, v, env)?
                .ok_or_else(|| EvalError::InfiniteQuantifier(v.clone()))?;
            for x in lo..=hi {
                env.stack.push((v.clone(), x));
                let ok = eval_pred(body, env);
                env.stack.pop();
                if !ok? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Pred::Exists(v, body) => {
            match guard_range(body, v, env)? {
                Some((lo, hi)) => {
                    for x in lo..=hi {
                        env.stack.push((v.clone(), x));
                        let ok = eval_pred(body, env);
                        env.stack.pop();
                        if ok? {
                            return Ok(true);
                        }
                    }
                    Ok(false)
                }
                None => {
                    // unbounded: witness hints may still discharge it
                    let candidates: Vec<i64> = env
                        .hints
                        .iter()
                        .filter(|(n, _)| n == v)
                        .map(|(_, x)| *x)
                        .collect();
                    for x in candidates {
                        env.stack.push((v.clone(), x));
                        let ok = eval_pred(body, env);
                        env.stack.pop();
                        if ok? {
                            return Ok(true);
                        }
                    }
                    Err(EvalError::InfiniteQuantifier(v.clone()))
                }
            }
        }
    }
}

/// Over-approximates the set of values of `var` for which `guard` can hold,
/// as a finite range. `None` when no finite bound can be extracted. Values
/// outside the returned range are guaranteed to falsify the guard.
fn guard_range(guard: &Pred, var: &str, env: &Env) -> Result<Option<(i64, i64)>, EvalError> {
    let (lo, hi) = bounds_of(guard, var, env)?;
    match (lo, hi) {
        (Some(lo), Some(hi)) => Ok(Some((lo, hi))),
        _ => Ok(None),
    }
}

fn bounds_of(
    p: &Pred,
    var: &str,
    env: &Env,
) -> Result<(Option<i64>, Option<i64>), EvalError> {
    // ground-evaluate an expression not mentioning `var`
    let ground = |e: &Expr| -> Option<i64> {
        let mut vs = std::collections::BTreeSet::new();
        fn collect(e: &Expr, out: &mut std::collections::BTreeSet<String>) {
            match e {
                Expr::Int(_) => {}
                Expr::Var(v) => {
                    out.insert(v.clone());
                }
                Expr::Neg(i) => collect(i, out),
                Expr::Bin(_, l, r) => {
                    collect(l, out);
                    collect(r, out);
                }
            }
        }
        collect(e, &mut vs);
        if vs.contains(var) {
            return None;
        }
        eval_expr(e, env).ok()
    };
    Ok(match p {
        Pred::In(v, lo, hi) if v == var => (ground(lo), ground(hi)),
        Pred::Cmp(op, Expr::Var(v), e) if v == var => match (op, ground(e)) {
            (CmpOp::Eq, Some(c)) => (Some(c), Some(c)),
            (CmpOp::Le, Some(c)) => (None, Some(c)),
            (CmpOp::Lt, Some(c)) => (None, c.checked_sub(1)),
            (CmpOp::Ge, Some(c)) => (Some(c), None),
            (CmpOp::Gt, Some(c)) => (c.checked_add(1), None),
            _ => (None, None),
        },
        Pred::Cmp(op, e, Expr::Var(v)) if v == var => match (op, ground(e)) {
            (CmpOp::Eq, Some(c)) => (Some(c), Some(c)),
            (CmpOp::Ge, Some(c)) => (None, Some(c)),
            (CmpOp::Gt, Some(c)) => (None, c.checked_sub(1)),
            (CmpOp::Le, Some(c)) => (Some(c), None),
            (CmpOp::Lt, Some(c)) => (c.checked_add(1), None),
            _ => (None, None),
        },
        Pred::And(a, b) => {
            // support of a conjunction lies in the intersection
            let (lo1, hi1) = bounds_of(a, var, env)?;
            let (lo2, hi2) = bounds_of(b, var, env)?;
            (opt_max(lo1, lo2), opt_min(hi1, hi2))
        }
        Pred::Or(a, b) => {
            // union: both sides must be bounded
            let (lo1, hi1) = bounds_of(a, var, env)?;
            let (lo2, hi2) = bounds_of(b, var, env)?;
            let lo = match (lo1, lo2) {
                (Some(a), Some(b)) => Some(a.min(b)),
                _ => None,
            };
            let hi = match (hi1, hi2) {
                (Some(a), Some(b)) => Some(a.max(b)),
                _ => None,
            };
            (lo, hi)
        }
        _ => (None, None),
    })
}

fn opt_max(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (x, None) | (None, x) => x,
    }
}

fn opt_min(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (x, None) | (None, x) => x,
    }
}
