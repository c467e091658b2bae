use super::EngineError;
use crate::domain::{interval_arith, isqrt, perfect_square_roots, ArithOp, Bound, Domain};
use crate::lang::ast::CmpOp;
use crate::lang::eval::euclid_mod;
use crate::scope::ScopeId;
use std::collections::{BTreeMap, VecDeque};

pub type CellId = usize;

/// One variable (or auxiliary expression result) with its current domain.
#[derive(Debug, Clone)]
pub struct VarCell {
    pub name: Option<String>,
    pub dom: Domain,
    /// propagators to wake when this domain narrows
    pub props: Vec<usize>,
    pub scope: ScopeId,
}

/// Monotone narrowing operators. Each activation only shrinks domains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Propagator {
    Eq(CellId, CellId),
    Neq(CellId, CellId),
    /// a <= b + c
    LeqOffset(CellId, CellId, i64),
    /// s = a + b
    Sum(CellId, CellId, CellId),
    /// p = a * b; the a == b case narrows via perfect squares
    Product(CellId, CellId, CellId),
    /// q = a / b, truncated toward zero; forward-only
    Div(CellId, CellId, CellId),
    /// r = a mod b, Euclidean; no narrowing of the dividend
    Mod(CellId, CellId, CellId),
}

impl Propagator {
    fn cells(&self) -> [CellId; 3] {
        match *self {
            Propagator::Eq(a, b) | Propagator::Neq(a, b) | Propagator::LeqOffset(a, b, _) => {
                [a, b, a]
            }
            Propagator::Sum(a, b, c)
            | Propagator::Product(a, b, c)
            | Propagator::Div(a, b, c)
            | Propagator::Mod(a, b, c) => [a, b, c],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropOutcome {
    AtFixpoint,
    Failed,
}

/// A bounds-consistency propagator network with an agenda fixpoint loop.
/// Fixpoint is reached exactly when the agenda is empty and no domain is
/// empty.
#[derive(Debug, Clone, Default)]
pub struct Network {
    pub cells: Vec<VarCell>,
    pub props: Vec<Propagator>,
    agenda: VecDeque<usize>,
    queued: Vec<bool>,
    failed: bool,
    consts: BTreeMap<i64, CellId>,
}

impl Network {
    pub fn new() -> Network {
        Network::default()
    }

    pub fn new_cell(&mut self, name: Option<&str>, dom: Domain, scope: ScopeId) -> CellId {
        let id = self.cells.len();
        self.cells.push(VarCell {
            name: name.map(str::to_string),
            dom,
            props: Vec::new(),
            scope,
        });
        id
    }

    /// Cell fixed to the given constant; shared per value.
    pub fn const_cell(&mut self, v: i64) -> CellId {
        if let Some(&c) = self.consts.get(&v) {
            return c;
        }
        let c = self.new_cell(None, Domain::singleton(v), 0);
        self.consts.insert(v, c);
        c
    }

    pub fn dom(&self, c: CellId) -> &Domain {
        &self.cells[c].dom
    }

    pub fn is_failed(&self) -> bool {
        self.failed
    }

    pub fn fail(&mut self) {
        self.failed = true;
    }

    pub fn add_prop(&mut self, p: Propagator) -> usize {
        let pid = self.props.len();
        for c in p.cells() {
            if !self.cells[c].props.contains(&pid) {
                self.cells[c].props.push(pid);
            }
        }
        self.props.push(p);
        self.queued.push(false);
        self.enqueue(pid);
        pid
    }

    fn enqueue(&mut self, pid: usize) {
        if !self.queued[pid] {
            self.queued[pid] = true;
            self.agenda.push_back(pid);
        }
    }

    fn wake(&mut self, cell: CellId) {
        let pids = self.cells[cell].props.clone();
        for pid in pids {
            self.enqueue(pid);
        }
    }

    /// Replaces a cell's domain with a subset of it. The caller guarantees
    /// `new` ⊆ current; narrowing to Empty fails the network.
    fn tighten(&mut self, cell: CellId, new: Domain) {
        if new == self.cells[cell].dom {
            return;
        }
        debug_assert_eq!(new.intersect(&self.cells[cell].dom), new, "widening narrow");
        if new.is_empty() {
            self.failed = true;
        }
        self.cells[cell].dom = new;
        self.wake(cell);
    }

    fn narrow_with(&mut self, cell: CellId, d: &Domain) {
        let new = self.cells[cell].dom.intersect(d);
        self.tighten(cell, new);
    }

    /// Fixes a cell to a single value (a labeling decision).
    pub fn assign(&mut self, cell: CellId, v: i64) {
        self.narrow_with(cell, &Domain::singleton(v));
    }

    /// Narrows a cell against `cell op k` for a constant `k`.
    pub fn narrow_cmp_const(&mut self, cell: CellId, op: CmpOp, k: i64) {
        let new = match op {
            CmpOp::Eq => self.cells[cell].dom.intersect(&Domain::singleton(k)),
            CmpOp::Ne => self.cells[cell].dom.remove(k),
            CmpOp::Le => self.cells[cell].dom.narrow_hi(Bound::Fin(k)),
            CmpOp::Ge => self.cells[cell].dom.narrow_lo(Bound::Fin(k)),
            CmpOp::Lt => match k.checked_sub(1) {
                Some(k1) => self.cells[cell].dom.narrow_hi(Bound::Fin(k1)),
                None => Domain::Empty,
            },
            CmpOp::Gt => match k.checked_add(1) {
                Some(k1) => self.cells[cell].dom.narrow_lo(Bound::Fin(k1)),
                None => Domain::Empty,
            },
        };
        self.tighten(cell, new);
    }

    /// Runs propagators until the agenda drains or a domain empties.
    pub fn propagate(&mut self) -> Result<PropOutcome, EngineError> {
        while let Some(pid) = self.agenda.pop_front() {
            self.queued[pid] = false;
            if self.failed {
                break;
            }
            self.run_prop(pid)?;
        }
        if self.failed {
            self.agenda.clear();
            self.queued.iter_mut().for_each(|q| *q = false);
            Ok(PropOutcome::Failed)
        } else {
            Ok(PropOutcome::AtFixpoint)
        }
    }

    /// Re-runs the fixpoint from a caller-chosen initial agenda order; used
    /// to check confluence.
    pub fn propagate_in_order(&mut self, order: &[usize]) -> Result<PropOutcome, EngineError> {
        self.agenda.clear();
        self.queued.iter_mut().for_each(|q| *q = false);
        for &pid in order {
            self.enqueue(pid);
        }
        self.propagate()
    }

    fn run_prop(&mut self, pid: usize) -> Result<(), EngineError> {
        match self.props[pid].clone() {
            Propagator::Eq(a, b) => {
                let d = self.cells[a].dom.intersect(&self.cells[b].dom);
                self.tighten(a, d.clone());
                self.tighten(b, d);
            }
            Propagator::Neq(a, b) => {
                if let Some(v) = self.cells[a].dom.fixed() {
                    let d = self.cells[b].dom.remove(v);
                    self.tighten(b, d);
                }
                if let Some(v) = self.cells[b].dom.fixed() {
                    let d = self.cells[a].dom.remove(v);
                    self.tighten(a, d);
                }
            }
            Propagator::LeqOffset(a, b, c) => {
                let hi = self.cells[b].dom.hi().offset(c);
                let d = self.cells[a].dom.narrow_hi(hi);
                self.tighten(a, d);
                let lo = self.cells[a].dom.lo().offset(c.saturating_neg());
                let d = self.cells[b].dom.narrow_lo(lo);
                self.tighten(b, d);
            }
            Propagator::Sum(a, b, s) => {
                if let (Some(x), Some(y)) =
                    (self.cells[a].dom.fixed(), self.cells[b].dom.fixed())
                {
                    // exact path: an overflowing sum has no i64 value, so the
                    // candidate is rejected rather than wrapped
                    match x.checked_add(y) {
                        Some(z) => self.narrow_with(s, &Domain::singleton(z)),
                        None => self.failed = true,
                    }
                    return Ok(());
                }
                let ds = interval_arith(ArithOp::Add, &self.cells[a].dom, &self.cells[b].dom);
                self.narrow_with(s, &ds);
                let da = interval_arith(ArithOp::Sub, &self.cells[s].dom, &self.cells[b].dom);
                self.narrow_with(a, &da);
                let db = interval_arith(ArithOp::Sub, &self.cells[s].dom, &self.cells[a].dom);
                self.narrow_with(b, &db);
            }
            Propagator::Product(a, b, p) => self.run_product(a, b, p),
            Propagator::Div(a, b, q) => {
                if let Some(f) = self.cells[b].dom.fixed() {
                    if f == 0 {
                        return Err(EngineError::DivisionByZero);
                    }
                    if let Some(x) = self.cells[a].dom.fixed() {
                        match x.checked_div(f) {
                            Some(z) => self.narrow_with(q, &Domain::singleton(z)),
                            None => self.failed = true,
                        }
                        return Ok(());
                    }
                    let (l1, l2) = (
                        div_bound(self.cells[a].dom.lo(), f),
                        div_bound(self.cells[a].dom.hi(), f),
                    );
                    let d = Domain::interval(l1.min(l2), l1.max(l2));
                    self.narrow_with(q, &d);
                }
            }
            Propagator::Mod(a, b, r) => {
                if let Some(d) = self.cells[b].dom.fixed() {
                    if d == 0 {
                        return Err(EngineError::DivisionByZero);
                    }
                    let max_r = (d.unsigned_abs() - 1).min(i64::MAX as u64) as i64;
                    let range = Domain::interval(Bound::Fin(0), Bound::Fin(max_r));
                    self.narrow_with(r, &range);
                    if let Some(x) = self.cells[a].dom.fixed() {
                        let m = euclid_mod(x, d).expect("divisor checked nonzero");
                        self.narrow_with(r, &Domain::singleton(m));
                    }
                }
            }
        }
        Ok(())
    }

    fn run_product(&mut self, a: CellId, b: CellId, p: CellId) {
        if let (Some(x), Some(y)) = (self.cells[a].dom.fixed(), self.cells[b].dom.fixed()) {
            match x.checked_mul(y) {
                Some(z) => self.narrow_with(p, &Domain::singleton(z)),
                None => self.failed = true,
            }
            return;
        }
        let dp = interval_arith(ArithOp::Mul, &self.cells[a].dom, &self.cells[b].dom);
        self.narrow_with(p, &dp);
        if a == b {
            // square: nonnegative, and a fixed product pins the roots
            let nonneg = Domain::interval(Bound::Fin(0), Bound::PosInf);
            self.narrow_with(p, &nonneg);
            if let Some(k) = self.cells[p].dom.fixed() {
                match perfect_square_roots(k) {
                    Some(roots) => self.narrow_with(a, &roots),
                    None => self.failed = true,
                }
                return;
            }
            if let Bound::Fin(hi) = self.cells[p].dom.hi() {
                if hi >= 0 {
                    let r = isqrt(hi);
                    let d = Domain::interval(Bound::Fin(-r), Bound::Fin(r));
                    self.narrow_with(a, &d);
                } else {
                    self.failed = true;
                }
            }
            return;
        }
        if let Some(f) = self.cells[a].dom.fixed() {
            self.narrow_factor(p, f, b);
        }
        if let Some(f) = self.cells[b].dom.fixed() {
            self.narrow_factor(p, f, a);
        }
    }

    /// With one factor fixed to `f`, narrows the other factor from the
    /// product's bounds.
    fn narrow_factor(&mut self, p: CellId, f: i64, other: CellId) {
        if f == 0 {
            self.narrow_with(p, &Domain::singleton(0));
            return;
        }
        let (lo_p, hi_p) = (self.cells[p].dom.lo(), self.cells[p].dom.hi());
        let (lo, hi) = if f > 0 {
            (quot_bound(lo_p, f, true), quot_bound(hi_p, f, false))
        } else {
            (quot_bound(hi_p, f, true), quot_bound(lo_p, f, false))
        };
        let d = Domain::interval(lo, hi);
        self.narrow_with(other, &d);
    }
}

fn floor_div(a: i128, b: i128) -> i128 {
    if b > 0 {
        a.div_euclid(b)
    } else {
        (-a).div_euclid(-b)
    }
}

fn ceil_div(a: i128, b: i128) -> i128 {
    -floor_div(-a, b)
}

fn clamp_bound(v: i128) -> Bound {
    Bound::Fin(v.clamp(i64::MIN as i128, i64::MAX as i128) as i64)
}

/// `b / f` as a bound, rounding up (`ceil`) for lower bounds and down for
/// upper bounds so the quotient range over-approximates.
fn quot_bound(b: Bound, f: i64, ceil: bool) -> Bound {
    match b {
        Bound::Fin(v) => {
            let q = if ceil {
                ceil_div(v as i128, f as i128)
            } else {
                floor_div(v as i128, f as i128)
            };
            clamp_bound(q)
        }
        inf => {
            if f > 0 {
                inf
            } else {
                match inf {
                    Bound::NegInf => Bound::PosInf,
                    Bound::PosInf => Bound::NegInf,
                    Bound::Fin(_) => unreachable!(),
                }
            }
        }
    }
}

/// Truncated `b / f` for forward division propagation (monotone in the
/// dividend for either sign of `f`).
fn div_bound(b: Bound, f: i64) -> Bound {
    match b {
        Bound::Fin(v) => clamp_bound(v as i128 / f as i128),
        Bound::NegInf => {
            if f > 0 {
                Bound::NegInf
            } else {
                Bound::PosInf
            }
        }
        Bound::PosInf => {
            if f > 0 {
                Bound::PosInf
            } else {
                Bound::NegInf
            }
        }
    }
}
