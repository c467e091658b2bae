use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Arithmetic operators. `Div` truncates toward zero, `Mod` is Euclidean
/// (result in `[0, |divisor|)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Mod => "mod",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "/=",
            CmpOp::Lt => "<",
            CmpOp::Gt => ">",
            CmpOp::Le => "<=",
            CmpOp::Ge => ">=",
        }
    }

    /// The comparison meaning the logical negation of this one.
    pub fn negate(self) -> CmpOp {
        match self {
            CmpOp::Eq => CmpOp::Ne,
            CmpOp::Ne => CmpOp::Eq,
            CmpOp::Lt => CmpOp::Ge,
            CmpOp::Ge => CmpOp::Lt,
            CmpOp::Gt => CmpOp::Le,
            CmpOp::Le => CmpOp::Gt,
        }
    }

    pub fn holds(self, a: i64, b: i64) -> bool {
        match self {
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
            CmpOp::Lt => a < b,
            CmpOp::Gt => a > b,
            CmpOp::Le => a <= b,
            CmpOp::Ge => a >= b,
        }
    }
}

/// Integer expression.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Int(i64),
    Var(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}

/// Predicate over integer expressions with connectives and single-variable
/// quantifiers (nesting expresses multiple bound variables).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Pred {
    True,
    False,
    Cmp(CmpOp, Expr, Expr),
    /// `var in lo..hi`, interval membership.
    In(String, Expr, Expr),
    And(Box<Pred>, Box<Pred>),
    Or(Box<Pred>, Box<Pred>),
    Implies(Box<Pred>, Box<Pred>),
    Iff(Box<Pred>, Box<Pred>),
    Not(Box<Pred>),
    Exists(String, Box<Pred>),
    Forall(String, Box<Pred>),
}

/// A witness carrier: total map from variable names to values.
pub type Assignment = BTreeMap<String, i64>;

impl Expr {
    pub fn var(name: &str) -> Expr {
        Expr::Var(name.to_string())
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Int(_) => {}
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Neg(e) => e.collect_vars(out),
            Expr::Bin(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }
}

impl Pred {
    /// Variables not bound by any enclosing quantifier.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Pred::True | Pred::False => {}
            Pred::Cmp(_, l, r) => {
                let mut vs = BTreeSet::new();
                l.collect_vars(&mut vs);
                r.collect_vars(&mut vs);
                out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
            }
            Pred::In(v, lo, hi) => {
                let mut vs = BTreeSet::new();
                vs.insert(v.clone());
                lo.collect_vars(&mut vs);
                hi.collect_vars(&mut vs);
                out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
            }
            Pred::And(p, q) | Pred::Or(p, q) | Pred::Implies(p, q) | Pred::Iff(p, q) => {
                p.collect_free(bound, out);
                q.collect_free(bound, out);
            }
            Pred::Not(p) => p.collect_free(bound, out),
            Pred::Exists(v, p) | Pred::Forall(v, p) => {
                bound.push(v.clone());
                p.collect_free(bound, out);
                bound.pop();
            }
        }
    }
}

// Precedence-aware pretty printing; `parse(pretty(p))` round-trips
// structurally. Connective loops in the grammar fold left.

fn expr_prec(e: &Expr) -> u8 {
    match e {
        Expr::Int(_) | Expr::Var(_) => 3,
        Expr::Neg(_) => 2,
        Expr::Bin(BinOp::Mul | BinOp::Div | BinOp::Mod, _, _) => 1,
        Expr::Bin(_, _, _) => 0,
    }
}

fn fmt_expr(e: &Expr, min_prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let prec = expr_prec(e);
    let parens = prec < min_prec;
    if parens {
        write!(f, "(")?;
    }
    match e {
        Expr::Int(v) => write!(f, "{v}")?,
        Expr::Var(v) => write!(f, "{v}")?,
        Expr::Neg(inner) => {
            write!(f, "-")?;
            fmt_expr(inner, 2, f)?;
        }
        Expr::Bin(op, l, r) => {
            fmt_expr(l, prec, f)?;
            write!(f, " {} ", op.symbol())?;
            fmt_expr(r, prec + 1, f)?;
        }
    }
    if parens {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_expr(self, 0, f)
    }
}

fn pred_prec(p: &Pred) -> u8 {
    match p {
        Pred::Iff(_, _) => 0,
        Pred::Implies(_, _) => 1,
        Pred::Or(_, _) => 2,
        Pred::And(_, _) => 3,
        _ => 4,
    }
}

fn fmt_pred(p: &Pred, min_prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let prec = pred_prec(p);
    let parens = prec < min_prec;
    if parens {
        write!(f, "(")?;
    }
    match p {
        Pred::True => write!(f, "true")?,
        Pred::False => write!(f, "false")?,
        Pred::Cmp(op, l, r) => write!(f, "{l} {} {r}", op.symbol())?,
        Pred::In(v, lo, hi) => {
            write!(f, "{v} in ")?;
            // keep the range endpoints additive-level to avoid `..` ambiguity
            fmt_expr(lo, 0, f)?;
            write!(f, "..")?;
            fmt_expr(hi, 0, f)?;
        }
        Pred::And(a, b) => {
            fmt_pred(a, prec, f)?;
            write!(f, " & ")?;
            fmt_pred(b, prec + 1, f)?;
        }
        Pred::Or(a, b) => {
            fmt_pred(a, prec, f)?;
            write!(f, " or ")?;
            fmt_pred(b, prec + 1, f)?;
        }
        Pred::Implies(a, b) => {
            fmt_pred(a, prec, f)?;
            write!(f, " => ")?;
            fmt_pred(b, prec + 1, f)?;
        }
        Pred::Iff(a, b) => {
            fmt_pred(a, prec, f)?;
            write!(f, " <=> ")?;
            fmt_pred(b, prec + 1, f)?;
        }
        Pred::Not(inner) => {
            write!(f, "not(")?;
            fmt_pred(inner, 0, f)?;
            write!(f, ")")?;
        }
        Pred::Exists(v, body) => {
            write!(f, "exists({v}, ")?;
            fmt_pred(body, 0, f)?;
            write!(f, ")")?;
        }
        Pred::Forall(v, body) => {
            write!(f, "forall({v}, ")?;
            fmt_pred(body, 0, f)?;
            write!(f, ")")?;
        }
    }
    if parens {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for Pred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_pred(self, 0, f)
    }
}
