//! Committed-choice inequality reasoning over difference constraints.
//!
//! Conjunctions of atoms of the form `x ≤ y + c` are closed under
//! transitivity; deriving `x ≤ x + c` with `c < 0` is a contradiction, which
//! settles goals like `x > y & y > x` without enumerating a single value —
//! something bounds propagation over unbounded domains can never do.

use crate::lang::ast::{CmpOp, Expr, Pred};
use std::collections::BTreeMap;
use std::collections::VecDeque;
use thiserror::Error;

/// `x ≤ y + c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffConstraint {
    pub x: String,
    pub y: String,
    pub c: i64,
}

impl DiffConstraint {
    pub fn new(x: impl Into<String>, y: impl Into<String>, c: i64) -> DiffConstraint {
        DiffConstraint { x: x.into(), y: y.into(), c }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("inequality store derived {x} <= {x} + {c} with {c} < 0")]
pub struct Contradiction {
    pub x: String,
    pub c: i64,
}

/// What [`normalize`] made of a comparison atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Normalized {
    /// one or two difference constraints (equalities produce two)
    Diffs(Vec<DiffConstraint>),
    /// `var op const`: better handled by domain narrowing
    DomainFact(String, CmpOp, i64),
    /// both sides ground
    Ground(bool),
    NotApplicable,
}

/// Splits an expression into `var + offset` when it has that shape.
fn linear_side(e: &Expr) -> Option<(Option<String>, i64)> {
    match e {
        Expr::Int(k) => Some((None, *k)),
        Expr::Var(v) => Some((Some(v.clone()), 0)),
        Expr::Neg(inner) => match linear_side(inner)? {
            (None, k) => Some((None, k.checked_neg()?)),
            _ => None, // -x is a coefficient of -1, out of scope
        },
        Expr::Bin(op, l, r) => {
            let (lv, lk) = linear_side(l)?;
            let (rv, rk) = linear_side(r)?;
            match op {
                crate::lang::ast::BinOp::Add => match (lv, rv) {
                    (v, None) => Some((v, lk.checked_add(rk)?)),
                    (None, v) => Some((v, lk.checked_add(rk)?)),
                    _ => None,
                },
                crate::lang::ast::BinOp::Sub => match (lv, rv) {
                    (v, None) => Some((v, lk.checked_sub(rk)?)),
                    _ => None,
                },
                _ => None,
            }
        }
    }
}

/// Normalizes a comparison whose sides are `var`, `const` or `var ± const`
/// into difference constraints. Anything with coefficients other than one
/// is out of scope and reported [`Normalized::NotApplicable`].
pub fn normalize(atom: &Pred) -> Normalized {
    let (op, lhs, rhs) = match atom {
        Pred::Cmp(op, l, r) => (*op, l, r),
        _ => return Normalized::NotApplicable,
    };
    let (Some((lv, lk)), Some((rv, rk))) = (linear_side(lhs), linear_side(rhs)) else {
        return Normalized::NotApplicable;
    };
    // move constants to the right: lv + lk op rv + rk  ≡  lv op rv + (rk - lk)
    let Some(c) = rk.checked_sub(lk) else {
        return Normalized::NotApplicable;
    };
    match (lv, rv) {
        (None, None) => Normalized::Ground(op.holds(0, c)),
        (Some(x), None) => Normalized::DomainFact(x, op, c),
        (None, Some(y)) => match c.checked_neg() {
            // k op y + c  ≡  y flipped-op -c
            Some(nc) => Normalized::DomainFact(y, flip(op), nc),
            None => Normalized::NotApplicable,
        },
        (Some(x), Some(y)) => {
            let mut out = Vec::new();
            let le = |x: &str, y: &str, c: i64| DiffConstraint::new(x, y, c);
            match op {
                CmpOp::Le => out.push(le(&x, &y, c)),
                CmpOp::Lt => match c.checked_sub(1) {
                    Some(c1) => out.push(le(&x, &y, c1)),
                    None => return Normalized::NotApplicable,
                },
                CmpOp::Ge => match c.checked_neg() {
                    Some(nc) => out.push(le(&y, &x, nc)),
                    None => return Normalized::NotApplicable,
                },
                CmpOp::Gt => match c.checked_neg().and_then(|nc| nc.checked_sub(1)) {
                    Some(nc1) => out.push(le(&y, &x, nc1)),
                    None => return Normalized::NotApplicable,
                },
                CmpOp::Eq => match c.checked_neg() {
                    Some(nc) => {
                        out.push(le(&x, &y, c));
                        out.push(le(&y, &x, nc));
                    }
                    None => return Normalized::NotApplicable,
                },
                CmpOp::Ne => return Normalized::NotApplicable,
            }
            Normalized::Diffs(out)
        }
    }
}

fn flip(op: CmpOp) -> CmpOp {
    match op {
        CmpOp::Lt => CmpOp::Gt,
        CmpOp::Gt => CmpOp::Lt,
        CmpOp::Le => CmpOp::Ge,
        CmpOp::Ge => CmpOp::Le,
        CmpOp::Eq => CmpOp::Eq,
        CmpOp::Ne => CmpOp::Ne,
    }
}

/// Store of difference constraints, kept transitively closed. Per ordered
/// variable pair only the tightest bound is retained.
#[derive(Debug, Clone, Default)]
pub struct RuleStore {
    bounds: BTreeMap<(String, String), i64>,
    agenda: VecDeque<(String, String)>,
    /// `x = y` facts derived by antisymmetry, for the engine to post
    pub equalities: Vec<(String, String)>,
}

impl RuleStore {
    pub fn new() -> RuleStore {
        RuleStore::default()
    }

    /// All stored constraints, tightest form.
    pub fn constraints(&self) -> impl Iterator<Item = DiffConstraint> + '_ {
        self.bounds
            .iter()
            .map(|((x, y), c)| DiffConstraint::new(x.clone(), y.clone(), *c))
    }

    pub fn len(&self) -> usize {
        self.bounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bounds.is_empty()
    }

    /// Inserts a constraint and restores transitive closure.
    pub fn add(&mut self, dc: DiffConstraint) -> Result<(), Contradiction> {
        self.insert(dc)?;
        self.close()
    }

    fn insert(&mut self, dc: DiffConstraint) -> Result<(), Contradiction> {
        if dc.x == dc.y {
            // x <= x + c: reflexivity discards, antireflexivity fails
            return if dc.c >= 0 {
                Ok(())
            } else {
                Err(Contradiction { x: dc.x, c: dc.c })
            };
        }
        let key = (dc.x.clone(), dc.y.clone());
        match self.bounds.get(&key) {
            Some(&old) if old <= dc.c => Ok(()), // subsumed
            _ => {
                if dc.c == 0 {
                    if let Some(0) = self.bounds.get(&(dc.y.clone(), dc.x.clone())) {
                        // antisymmetry: x <= y and y <= x
                        self.equalities.push((dc.x.clone(), dc.y.clone()));
                    }
                }
                self.bounds.insert(key.clone(), dc.c);
                self.agenda.push_back(key);
                Ok(())
            }
        }
    }

    fn close(&mut self) -> Result<(), Contradiction> {
        while let Some((x, y)) = self.agenda.pop_front() {
            let Some(&c) = self.bounds.get(&(x.clone(), y.clone())) else {
                continue;
            };
            // compose forwards: x<=y+c, y<=z+c2  =>  x<=z+c+c2
            let forwards: Vec<(String, i64)> = self
                .bounds
                .range((y.clone(), String::new())..)
                .take_while(|((a, _), _)| *a == y)
                .map(|((_, z), c2)| (z.clone(), *c2))
                .collect();
            for (z, c2) in forwards {
                let sum = c.checked_add(c2).ok_or(Contradiction {
                    // a chain this long only tightens further; treat
                    // saturation below i64 as an over-tight bound
                    x: x.clone(),
                    c: i64::MIN,
                })?;
                self.insert(DiffConstraint::new(x.clone(), z.clone(), sum))?;
            }
            // compose backwards: w<=x+c0, x<=y+c  =>  w<=y+c0+c
            let backwards: Vec<(String, i64)> = self
                .bounds
                .iter()
                .filter(|((_, b), _)| *b == x)
                .map(|((w, _), c0)| (w.clone(), *c0))
                .collect();
            for (w, c0) in backwards {
                let sum = c0.checked_add(c).ok_or(Contradiction { x: w.clone(), c: i64::MIN })?;
                self.insert(DiffConstraint::new(w, y.clone(), sum))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn norm(text: &str) -> Normalized {
        normalize(&parse(text).unwrap())
    }

    #[test]
    fn normalization_table() {
        assert_eq!(norm("x > y"), Normalized::Diffs(vec![DiffConstraint::new("y", "x", -1)]));
        assert_eq!(norm("x <= y"), Normalized::Diffs(vec![DiffConstraint::new("x", "y", 0)]));
        assert_eq!(norm("x + 2 > y + 1"), Normalized::Diffs(vec![DiffConstraint::new("y", "x", 0)]));
        assert_eq!(
            norm("x = y + 3"),
            Normalized::Diffs(vec![
                DiffConstraint::new("x", "y", 3),
                DiffConstraint::new("y", "x", -3),
            ])
        );
        assert_eq!(norm("x > 5"), Normalized::DomainFact("x".into(), CmpOp::Gt, 5));
        assert_eq!(norm("3 < y"), Normalized::DomainFact("y".into(), CmpOp::Gt, 3));
        assert_eq!(norm("x*x = 10*x"), Normalized::NotApplicable);
        assert_eq!(norm("x /= y"), Normalized::NotApplicable);
        assert_eq!(norm("2 + 1 = 3"), Normalized::Ground(true));
        assert_eq!(norm("2 > 3"), Normalized::Ground(false));
    }

    #[test]
    fn cyclic_pair_contradicts() {
        let mut store = RuleStore::new();
        store.add(DiffConstraint::new("y", "x", -1)).unwrap(); // x > y
        let err = store.add(DiffConstraint::new("x", "y", -1)).unwrap_err(); // y > x
        assert!(err.c < 0);
    }

    #[test]
    fn transitivity_derives_chain() {
        let mut store = RuleStore::new();
        store.add(DiffConstraint::new("x", "y", 0)).unwrap();
        store.add(DiffConstraint::new("y", "z", 0)).unwrap();
        assert!(store
            .constraints()
            .any(|dc| dc == DiffConstraint::new("x", "z", 0)));
    }

    #[test]
    fn four_cycle_contradicts() {
        // w > x, x > y, y > z, z > w: cycle sum -4
        let mut store = RuleStore::new();
        let atoms = [("x", "w"), ("y", "x"), ("z", "y")];
        for (a, b) in atoms {
            store.add(DiffConstraint::new(a, b, -1)).unwrap();
        }
        assert!(store.add(DiffConstraint::new("w", "z", -1)).is_err());
    }

    #[test]
    fn offset_cycle_contradicts() {
        // x > y & y > x + 1
        let mut store = RuleStore::new();
        store.add(DiffConstraint::new("y", "x", -1)).unwrap();
        assert!(store.add(DiffConstraint::new("x", "y", -2)).is_err());
    }

    #[test]
    fn antisymmetry_emits_equality() {
        let mut store = RuleStore::new();
        store.add(DiffConstraint::new("x", "y", 0)).unwrap();
        store.add(DiffConstraint::new("y", "x", 0)).unwrap();
        assert_eq!(store.equalities, vec![("y".to_string(), "x".to_string())]);
    }

    #[test]
    fn subsumption_keeps_tightest() {
        let mut store = RuleStore::new();
        store.add(DiffConstraint::new("x", "y", 5)).unwrap();
        store.add(DiffConstraint::new("x", "y", 2)).unwrap();
        store.add(DiffConstraint::new("x", "y", 9)).unwrap();
        let cs: Vec<_> = store.constraints().collect();
        assert_eq!(cs, vec![DiffConstraint::new("x", "y", 2)]);
    }

    /// Bellman-Ford over the difference graph (edge y -> x with weight c for
    /// x <= y + c): a negative cycle exists iff the conjunction is
    /// unsatisfiable over the integers.
    fn has_negative_cycle(n: usize, edges: &[(usize, usize, i64)]) -> bool {
        let mut dist = vec![0i128; n];
        for _ in 0..n {
            for &(u, v, w) in edges {
                if dist[u] + (w as i128) < dist[v] {
                    dist[v] = dist[u] + w as i128;
                }
            }
        }
        edges.iter().any(|&(u, v, w)| dist[u] + (w as i128) < dist[v])
    }

    #[test]
    fn contradiction_matches_bellman_ford() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let names = ["a", "b", "c", "d", "e", "f"];
        for _ in 0..300 {
            let nvars = rng.gen_range(2..=names.len());
            let ncons = rng.gen_range(1..=30);
            let mut edges = Vec::new();
            let mut store = RuleStore::new();
            let mut failed = false;
            for _ in 0..ncons {
                let x = rng.gen_range(0..nvars);
                let mut y = rng.gen_range(0..nvars);
                while y == x {
                    y = rng.gen_range(0..nvars);
                }
                let c = rng.gen_range(-3i64..=3);
                edges.push((y, x, c)); // x <= y + c: edge y -> x weight c
                if !failed {
                    failed = store
                        .add(DiffConstraint::new(names[x], names[y], c))
                        .is_err();
                }
            }
            assert_eq!(
                failed,
                has_negative_cycle(nvars, &edges),
                "edges: {edges:?}"
            );
        }
    }

    #[test]
    fn closure_stays_quadratic() {
        let mut store = RuleStore::new();
        let names: Vec<String> = (0..12).map(|i| format!("v{i}")).collect();
        for i in 0..11 {
            store
                .add(DiffConstraint::new(names[i].clone(), names[i + 1].clone(), 1))
                .unwrap();
        }
        assert!(store.len() <= 12 * 12);
        // chain closure: v0 <= v11 + 11
        assert!(store
            .constraints()
            .any(|dc| dc == DiffConstraint::new("v0", "v11", 11)));
    }
}
