use super::compile::{conj_of_atoms, nnf, subst, Goal, UniversalSpec};
use super::net::{CellId, Network, PropOutcome, Propagator};
use super::EngineError;
use crate::domain::Domain;
use crate::enumerate::{
    check_universal, perm_key, CheckVerdict, Strategy, UniversalOutcome, ValueStream,
};
use crate::lang::ast::{Assignment, BinOp, CmpOp, Expr, Pred};
use crate::lang::eval::{evaluate, evaluate_with_hints, EvalError};
use crate::rules::{normalize, DiffConstraint, Normalized, RuleStore};
use crate::scope::{
    classify, EnumReport, EnumStatus, IncompleteReason, ScopeId, ScopeKind, ScopeTree,
    SolveResult, UnknownReason,
};
use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

/// Search-wide knobs. Budget counts value trials per scope, cumulatively
/// over re-activations, for reproducibility; the wall-clock timeout is a
/// secondary kill switch.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub strategy: Strategy,
    pub seed: u64,
    pub budget: u64,
    pub rules_enabled: bool,
    pub timeout_ms: Option<u64>,
}

impl Default for SolverConfig {
    fn default() -> SolverConfig {
        SolverConfig {
            strategy: Strategy::AlternatingFromZero,
            seed: 0,
            budget: 10_000,
            rules_enabled: true,
            timeout_ms: None,
        }
    }
}

/// Result of all-solutions mode. The solution set is only the complete
/// answer when `complete` holds; otherwise `reason` says why enumeration
/// could not be exhaustive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AllSolutions {
    pub solutions: Vec<Assignment>,
    pub complete: bool,
    pub reason: Option<UnknownReason>,
    pub report: EnumReport,
}

/// Solves for one witness (or a refutation, or Unknown).
pub fn solve(p: &Pred, cfg: &SolverConfig) -> Result<SolveResult, EngineError> {
    solve_depth(p, cfg, 0)
}

fn solve_depth(p: &Pred, cfg: &SolverConfig, depth: u32) -> Result<SolveResult, EngineError> {
    let mut s = Solver::new(p, cfg, false, depth);
    let found = s.run()?;
    Ok(classify(&s.tree, found, s.budget_stopped, s.timed_out))
}

/// Enumerates every solution; the set is complete iff all enumeration was
/// exhaustive.
pub fn solve_all(p: &Pred, cfg: &SolverConfig) -> Result<AllSolutions, EngineError> {
    let mut s = Solver::new(p, cfg, true, 0);
    s.run()?;
    let verdict = classify(&s.tree, None, false, s.timed_out);
    let (complete, reason) = match &verdict {
        SolveResult::Unsat { .. } => (true, None),
        SolveResult::Unknown { reason, .. } => (false, Some(*reason)),
        SolveResult::Sat { .. } => unreachable!("classify never returns Sat without a witness"),
    };
    Ok(AllSolutions {
        solutions: s.solutions.into_iter().collect(),
        complete,
        reason,
        report: verdict.report().clone(),
    })
}

type Env = BTreeMap<String, CellId>;

#[derive(Debug, Clone)]
struct Decision {
    cell: CellId,
    scope: ScopeId,
    name: String,
}

#[derive(Debug, Clone)]
struct UTask {
    scope: ScopeId,
    spec: UniversalSpec,
    env: Env,
}

#[derive(Debug, Clone)]
struct PendingDisj {
    scope: ScopeId,
    alts: Vec<Goal>,
    env: Env,
}

#[derive(Debug, Clone, Default)]
struct FlatUnit {
    decisions: Vec<Decision>,
    universals: Vec<UTask>,
    disjuncts: Vec<PendingDisj>,
    /// comparison atoms of the conjunctive spine, for the rule store
    rule_atoms: Vec<(Pred, Env)>,
}

impl FlatUnit {
    fn branch_shell(&self) -> FlatUnit {
        FlatUnit {
            decisions: self.decisions.clone(),
            universals: self.universals.clone(),
            disjuncts: self.disjuncts.clone(),
            rule_atoms: Vec::new(),
        }
    }
}

struct Solver<'a> {
    cfg: &'a SolverConfig,
    original: &'a Pred,
    tree: ScopeTree,
    root_cells: BTreeMap<String, CellId>,
    collect_all: bool,
    solutions: BTreeSet<Assignment>,
    budget_stopped: bool,
    timed_out: bool,
    deadline: Option<Instant>,
    depth: u32,
}

impl<'a> Solver<'a> {
    fn new(p: &'a Pred, cfg: &'a SolverConfig, collect_all: bool, depth: u32) -> Solver<'a> {
        Solver {
            cfg,
            original: p,
            tree: ScopeTree::new(),
            root_cells: BTreeMap::new(),
            collect_all,
            solutions: BTreeSet::new(),
            budget_stopped: false,
            timed_out: false,
            deadline: cfg
                .timeout_ms
                .map(|ms| Instant::now() + Duration::from_millis(ms)),
            depth,
        }
    }

    fn check_deadline(&mut self) -> bool {
        if let Some(d) = self.deadline {
            if Instant::now() >= d {
                self.timed_out = true;
                return true;
            }
        }
        false
    }

    fn run(&mut self) -> Result<Option<Assignment>, EngineError> {
        let mut net = Network::new();
        let mut env = Env::new();
        let mut unit = FlatUnit::default();
        for v in self.original.free_vars() {
            let sid = self
                .tree
                .add_child(ScopeTree::ROOT, ScopeKind::Existential, &v);
            let cell = net.new_cell(Some(&v), Domain::full(), sid);
            env.insert(v.clone(), cell);
            self.root_cells.insert(v.clone(), cell);
            unit.decisions.push(Decision { cell, scope: sid, name: v });
        }
        let goal = nnf(self.original, true);
        self.flatten(&goal, &mut net, ScopeTree::ROOT, &mut env, &mut unit)?;
        let mut store = RuleStore::new();
        if self.apply_rules(&mut net, &mut unit, &mut store)? {
            // contradiction before any enumeration: a sound refutation
            return Ok(None);
        }
        self.search(net, unit, store)
    }

    fn flatten(
        &mut self,
        g: &Goal,
        net: &mut Network,
        scope: ScopeId,
        env: &mut Env,
        out: &mut FlatUnit,
    ) -> Result<(), EngineError> {
        match g {
            Goal::Lit(true) => {}
            Goal::Lit(false) => net.fail(),
            Goal::Atom(op, l, r) => {
                let c1 = flatten_expr(l, net, env)?;
                let c2 = flatten_expr(r, net, env)?;
                post_cmp(net, *op, c1, c2);
                out.rule_atoms
                    .push((Pred::Cmp(*op, l.clone(), r.clone()), env.clone()));
            }
            Goal::Conj(gs) => {
                for sub in gs {
                    self.flatten(sub, net, scope, env, out)?;
                }
            }
            Goal::Disj(alts) => out.disjuncts.push(PendingDisj {
                scope,
                alts: alts.clone(),
                env: env.clone(),
            }),
            Goal::Exists(v, body) => {
                let sid = self.tree.add_child(scope, ScopeKind::Existential, v);
                let cell = net.new_cell(Some(v), Domain::full(), sid);
                let prev = env.insert(v.clone(), cell);
                out.decisions.push(Decision {
                    cell,
                    scope: sid,
                    name: v.clone(),
                });
                self.flatten(body, net, sid, env, out)?;
                match prev {
                    Some(old) => env.insert(v.clone(), old),
                    None => env.remove(v),
                };
            }
            Goal::Universal(spec) => {
                let sid = self.tree.add_child(scope, ScopeKind::Universal, &spec.var);
                out.universals.push(UTask {
                    scope: sid,
                    spec: spec.clone(),
                    env: env.clone(),
                });
            }
        }
        Ok(())
    }

    /// Feeds the conjunctive spine's comparison atoms into the rule store.
    /// Returns true on a derived contradiction. Surviving constraints and
    /// equalities are forwarded to the propagator network.
    fn apply_rules(
        &mut self,
        net: &mut Network,
        unit: &mut FlatUnit,
        store: &mut RuleStore,
    ) -> Result<bool, EngineError> {
        let atoms = std::mem::take(&mut unit.rule_atoms);
        if !self.cfg.rules_enabled {
            return Ok(false);
        }
        for (atom, env) in atoms {
            match normalize(&atom) {
                Normalized::Diffs(dcs) => {
                    for dc in dcs {
                        let (Some(&cx), Some(&cy)) = (env.get(&dc.x), env.get(&dc.y)) else {
                            continue;
                        };
                        let keyed = DiffConstraint::new(cell_key(cx), cell_key(cy), dc.c);
                        if store.add(keyed).is_err() {
                            return Ok(true);
                        }
                    }
                }
                Normalized::DomainFact(v, op, k) => {
                    if let Some(&c) = env.get(&v) {
                        net.narrow_cmp_const(c, op, k);
                    }
                }
                Normalized::Ground(true) => {}
                Normalized::Ground(false) => net.fail(),
                Normalized::NotApplicable => {}
            }
        }
        for dc in store.constraints().collect::<Vec<_>>() {
            net.add_prop(Propagator::LeqOffset(
                parse_key(&dc.x)?,
                parse_key(&dc.y)?,
                dc.c,
            ));
        }
        for (a, b) in store.equalities.clone() {
            net.add_prop(Propagator::Eq(parse_key(&a)?, parse_key(&b)?));
        }
        Ok(false)
    }

    fn search(
        &mut self,
        mut net: Network,
        mut unit: FlatUnit,
        store: RuleStore,
    ) -> Result<Option<Assignment>, EngineError> {
        if net.propagate()? == PropOutcome::Failed {
            return Ok(None);
        }
        if !unit.disjuncts.is_empty() {
            let pd = unit.disjuncts.remove(0);
            for alt in &pd.alts {
                if self.check_deadline() {
                    break;
                }
                // fold any statuses from a failed sibling branch into the
                // history joins: the current activation layer must describe
                // only the branch that ends up accepted
                for id in 0..self.tree.nodes().len() {
                    self.tree.activate(id);
                }
                let mut net2 = net.clone();
                let mut unit2 = unit.branch_shell();
                let mut env2 = pd.env.clone();
                self.flatten(alt, &mut net2, pd.scope, &mut env2, &mut unit2)?;
                let mut store2 = store.clone();
                if self.apply_rules(&mut net2, &mut unit2, &mut store2)? {
                    continue; // this branch refuted outright
                }
                if let Some(w) = self.search(net2, unit2, store2)? {
                    return Ok(Some(w));
                }
            }
            return Ok(None);
        }
        let pending = unit.decisions.clone();
        self.label(net, pending, &unit)
    }

    fn label(
        &mut self,
        net: Network,
        pending: Vec<Decision>,
        unit: &FlatUnit,
    ) -> Result<Option<Assignment>, EngineError> {
        if self.check_deadline() {
            return Ok(None);
        }
        // variables pinned by propagation need no enumeration
        let mut pending: Vec<Decision> = pending
            .into_iter()
            .filter(|d| net.dom(d.cell).fixed().is_none())
            .collect();
        if pending.is_empty() {
            return self.finish(&net, unit);
        }
        // outer scopes first, then finite domains, then textual order
        let idx = pending
            .iter()
            .enumerate()
            .min_by_key(|(_, d)| {
                (
                    self.scope_depth(d.scope),
                    !net.dom(d.cell).is_finite(),
                    d.name.clone(),
                    d.cell,
                )
            })
            .map(|(i, _)| i)
            .expect("pending is nonempty");
        let d = pending.swap_remove(idx);
        self.tree.activate(d.scope);
        let dom = net.dom(d.cell).clone();
        if !dom.is_finite() {
            self.tree
                .record(d.scope, EnumStatus::Incomplete(IncompleteReason::InfiniteDomain))
                .expect("scope exists");
        }
        let mut stream = ValueStream::new(
            self.cfg.strategy,
            &dom,
            perm_key(self.cfg.seed, d.scope as u64),
        );
        if stream.fell_back {
            self.tree.node_mut(d.scope).fallback = true;
        }
        loop {
            if self.check_deadline() {
                return Ok(None);
            }
            if self.tree.node(d.scope).trials >= self.cfg.budget {
                self.tree
                    .record(d.scope, EnumStatus::Incomplete(IncompleteReason::BudgetExhausted))
                    .expect("scope exists");
                self.budget_stopped = true;
                return Ok(None);
            }
            let Some(v) = stream.next() else {
                // drained: every value of a finite domain was tried
                self.tree
                    .record(d.scope, EnumStatus::Exhaustive)
                    .expect("scope exists");
                return Ok(None);
            };
            self.tree.node_mut(d.scope).trials += 1;
            let mut net2 = net.clone();
            net2.assign(d.cell, v);
            if net2.propagate()? == PropOutcome::Failed {
                self.tree.node_mut(d.scope).failed_trials += 1;
                continue;
            }
            match self.label(net2, pending.clone(), unit)? {
                Some(w) => {
                    if self.collect_all {
                        self.solutions.insert(w);
                        continue;
                    }
                    self.tree.node_mut(d.scope).stopped_early = stream.next().is_some();
                    return Ok(Some(w));
                }
                None => {
                    self.tree.node_mut(d.scope).failed_trials += 1;
                }
            }
        }
    }

    /// All existential variables are ground: run the deferred universal
    /// checks, then assemble and validate the witness.
    fn finish(
        &mut self,
        net: &Network,
        unit: &FlatUnit,
    ) -> Result<Option<Assignment>, EngineError> {
        for ut in &unit.universals {
            self.tree.activate(ut.scope);
            match self.check_universal_task(net, ut)? {
                UniversalOutcome::Holds => {
                    self.tree
                        .record(ut.scope, EnumStatus::Exhaustive)
                        .expect("scope exists");
                }
                UniversalOutcome::Counterexample(_) => {
                    // conclusive for this candidate: the sweep was sound
                    self.tree
                        .record(ut.scope, EnumStatus::Exhaustive)
                        .expect("scope exists");
                    return Ok(None);
                }
                UniversalOutcome::AbortInfinite => {
                    self.tree.abort_universal(ut.scope);
                    return Ok(None);
                }
                UniversalOutcome::BudgetExhausted => {
                    self.tree
                        .record(
                            ut.scope,
                            EnumStatus::Incomplete(IncompleteReason::BudgetExhausted),
                        )
                        .expect("scope exists");
                    self.budget_stopped = true;
                    return Ok(None);
                }
                UniversalOutcome::Inconclusive => {
                    self.tree
                        .record(
                            ut.scope,
                            EnumStatus::Incomplete(IncompleteReason::BudgetExhausted),
                        )
                        .expect("scope exists");
                    return Ok(None);
                }
            }
        }
        let mut witness = Assignment::new();
        let mut hints = Vec::new();
        for dec in &unit.decisions {
            let v = net.dom(dec.cell).fixed().ok_or_else(|| {
                EngineError::Internal(format!("decision variable {} not ground", dec.name))
            })?;
            witness.insert(dec.name.clone(), v);
            hints.push((dec.name.clone(), v));
        }
        match evaluate_with_hints(self.original, &witness, &hints) {
            Ok(true) => Ok(Some(witness)),
            // a propagator bug would show up here; reject, never report
            Ok(false) => Ok(None),
            // overflowing candidates are rejected, not reported
            Err(EvalError::Overflow) => Ok(None),
            Err(EvalError::DivisionByZero) => Err(EngineError::DivisionByZero),
            // the solver's own universal/existential checks already passed
            Err(EvalError::InfiniteQuantifier(_)) => Ok(Some(witness)),
            Err(EvalError::UnboundVariable(v)) => Err(EngineError::Internal(format!(
                "unbound variable {v} in witness validation"
            ))),
        }
    }

    fn check_universal_task(
        &mut self,
        net: &Network,
        ut: &UTask,
    ) -> Result<UniversalOutcome, EngineError> {
        let dom = match &ut.spec.sweep_guard {
            Some(g) => self.guard_domain(net, g, ut)?,
            None => Domain::full(),
        };
        let mut base = Assignment::new();
        for (name, &cell) in &ut.env {
            if let Some(v) = net.dom(cell).fixed() {
                base.insert(name.clone(), v);
            }
        }
        let remaining = self.cfg.budget.saturating_sub(self.tree.node(ut.scope).trials);
        let mut checks = 0u64;
        let mut fatal: Option<EngineError> = None;
        let cfg = self.cfg;
        let depth = self.depth;
        let outcome = check_universal(&dom, remaining, |v| {
            checks += 1;
            let mut a = base.clone();
            a.insert(ut.spec.var.clone(), v);
            match evaluate(&ut.spec.check, &a) {
                Ok(true) => CheckVerdict::Holds,
                Ok(false) => CheckVerdict::Fails,
                Err(EvalError::InfiniteQuantifier(_)) => subsolve(&ut.spec.check, &a, cfg, depth),
                Err(EvalError::Overflow) => CheckVerdict::Undecided,
                Err(EvalError::DivisionByZero) => {
                    fatal = Some(EngineError::DivisionByZero);
                    CheckVerdict::Undecided
                }
                Err(EvalError::UnboundVariable(n)) => {
                    fatal = Some(EngineError::Internal(format!(
                        "unbound variable {n} in universal check"
                    )));
                    CheckVerdict::Undecided
                }
            }
        });
        self.tree.node_mut(ut.scope).trials += checks;
        if let Some(e) = fatal {
            return Err(e);
        }
        Ok(outcome)
    }

    /// Domain of the quantified variable after propagating the guard in a
    /// scratch network. Values outside it satisfy the obligation trivially.
    /// Guards with choice points or nested scopes fall back to the full
    /// (infinite) line, which is conservative.
    fn guard_domain(
        &mut self,
        net: &Network,
        guard: &Pred,
        ut: &UTask,
    ) -> Result<Domain, EngineError> {
        let goal = nnf(guard, true);
        if !conj_of_atoms(&goal) {
            return Ok(Domain::full());
        }
        let mut net2 = net.clone();
        let cell = net2.new_cell(Some(&ut.spec.var), Domain::full(), ut.scope);
        let mut env = ut.env.clone();
        env.insert(ut.spec.var.clone(), cell);
        let mut scratch = FlatUnit::default();
        self.flatten(&goal, &mut net2, ut.scope, &mut env, &mut scratch)?;
        if net2.propagate()? == PropOutcome::Failed {
            return Ok(Domain::Empty); // guard unsatisfiable: vacuously true
        }
        Ok(net2.dom(cell).clone())
    }

    fn scope_depth(&self, mut sid: ScopeId) -> usize {
        let mut depth = 0;
        while let Some(p) = self.tree.node(sid).parent {
            depth += 1;
            sid = p;
        }
        depth
    }
}

/// Decides a closed (after substitution) obligation the ground evaluator
/// refused, by a bounded recursive solve.
fn subsolve(check: &Pred, a: &Assignment, cfg: &SolverConfig, depth: u32) -> CheckVerdict {
    if depth >= 6 {
        return CheckVerdict::Undecided;
    }
    let p = subst(check, a);
    match solve_depth(&p, cfg, depth + 1) {
        Ok(SolveResult::Sat { .. }) => CheckVerdict::Holds,
        Ok(SolveResult::Unsat { .. }) => CheckVerdict::Fails,
        Ok(SolveResult::Unknown { .. }) | Err(_) => CheckVerdict::Undecided,
    }
}

fn cell_key(c: CellId) -> String {
    format!("v{c}")
}

fn parse_key(k: &str) -> Result<CellId, EngineError> {
    k.strip_prefix('v')
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| EngineError::Internal(format!("malformed cell key {k}")))
}

fn flatten_expr(e: &Expr, net: &mut Network, env: &Env) -> Result<CellId, EngineError> {
    match e {
        Expr::Int(k) => Ok(net.const_cell(*k)),
        Expr::Var(v) => env
            .get(v)
            .copied()
            .ok_or_else(|| EngineError::Internal(format!("unresolved variable {v}"))),
        Expr::Neg(inner) => {
            let c = flatten_expr(inner, net, env)?;
            let zero = net.const_cell(0);
            let n = net.new_cell(None, Domain::full(), 0);
            net.add_prop(Propagator::Sum(n, c, zero)); // n + c = 0
            Ok(n)
        }
        Expr::Bin(op, l, r) => {
            let cl = flatten_expr(l, net, env)?;
            let cr = flatten_expr(r, net, env)?;
            let aux = net.new_cell(None, Domain::full(), 0);
            let prop = match op {
                BinOp::Add => Propagator::Sum(cl, cr, aux),
                // aux = l - r  <=>  l = aux + r
                BinOp::Sub => Propagator::Sum(aux, cr, cl),
                BinOp::Mul => Propagator::Product(cl, cr, aux),
                BinOp::Div => Propagator::Div(cl, cr, aux),
                BinOp::Mod => Propagator::Mod(cl, cr, aux),
            };
            net.add_prop(prop);
            Ok(aux)
        }
    }
}

fn post_cmp(net: &mut Network, op: CmpOp, c1: CellId, c2: CellId) {
    let prop = match op {
        CmpOp::Eq => Propagator::Eq(c1, c2),
        CmpOp::Ne => Propagator::Neq(c1, c2),
        CmpOp::Lt => Propagator::LeqOffset(c1, c2, -1),
        CmpOp::Le => Propagator::LeqOffset(c1, c2, 0),
        CmpOp::Gt => Propagator::LeqOffset(c2, c1, -1),
        CmpOp::Ge => Propagator::LeqOffset(c2, c1, 0),
    };
    net.add_prop(prop);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Bound;
    use crate::lang::parse;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    fn solve_text(text: &str) -> SolveResult {
        solve(&parse(text).unwrap(), &cfg()).unwrap()
    }

    /// Network after compiling and propagating, for fixpoint-level checks.
    fn fixpoint(text: &str) -> (Network, Option<CellId>, PropOutcome) {
        let p = parse(text).unwrap();
        let cfg = cfg();
        let mut s = Solver::new(&p, &cfg, false, 0);
        let mut net = Network::new();
        let mut env = Env::new();
        let mut unit = FlatUnit::default();
        for v in p.free_vars() {
            let sid = s.tree.add_child(ScopeTree::ROOT, ScopeKind::Existential, &v);
            let cell = net.new_cell(Some(&v), Domain::full(), sid);
            env.insert(v.clone(), cell);
            unit.decisions.push(Decision { cell, scope: sid, name: v });
        }
        let goal = nnf(&p, true);
        s.flatten(&goal, &mut net, ScopeTree::ROOT, &mut env, &mut unit)
            .unwrap();
        let x = env.get("x").copied();
        let outcome = net.propagate().unwrap();
        (net, x, outcome)
    }

    #[test]
    fn fixpoint_square_narrows_to_roots() {
        let (net, x, outcome) = fixpoint("x*x = 10000");
        assert_eq!(outcome, PropOutcome::AtFixpoint);
        assert_eq!(*net.dom(x.unwrap()), Domain::finite_set(vec![-100, 100]));
    }

    #[test]
    fn fixpoint_non_square_fails() {
        let (_, _, outcome) = fixpoint("x*x = 10001");
        assert_eq!(outcome, PropOutcome::Failed);
    }

    #[test]
    fn fixpoint_mod_keeps_domain_infinite() {
        let (net, x, outcome) = fixpoint("x > 10000 & x mod 1234 = 1");
        assert_eq!(outcome, PropOutcome::AtFixpoint);
        let d = net.dom(x.unwrap());
        assert_eq!(d.lo(), Bound::Fin(10001));
        assert_eq!(d.hi(), Bound::PosInf);
    }

    #[test]
    fn fixpoint_interval_membership_pins_singleton() {
        let (net, x, outcome) = fixpoint("x in 5..5");
        assert_eq!(outcome, PropOutcome::AtFixpoint);
        assert_eq!(net.dom(x.unwrap()).fixed(), Some(5));
    }

    #[test]
    fn fixpoint_confluent_under_agenda_shuffles() {
        let texts = [
            "x in -15..15 & y in -15..15 & x + y = 7 & x > y",
            "x in -15..15 & y in -15..15 & z in -15..15 & x * y = z & z > 3 & x <= y",
            "x in -15..15 & x * x = 9 & y in -15..15 & y mod 4 = 1",
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for text in texts {
            let (reference, _, _) = fixpoint(text);
            let ref_doms: Vec<Domain> = reference.cells.iter().map(|c| c.dom.clone()).collect();
            for _ in 0..20 {
                let (mut net, _, _) = fixpoint(text);
                let mut order: Vec<usize> = (0..net.props.len()).collect();
                order.shuffle(&mut rng);
                net.propagate_in_order(&order).unwrap();
                let doms: Vec<Domain> = net.cells.iter().map(|c| c.dom.clone()).collect();
                assert_eq!(doms, ref_doms, "agenda order changed the fixpoint of {text}");
            }
        }
    }

    #[test]
    fn solve_mod_example_finds_least_witness() {
        match solve_text("x > 10000 & x mod 1234 = 1") {
            SolveResult::Sat { witness, report } => {
                assert_eq!(witness.get("x"), Some(&11107));
                assert_eq!(report.scopes[0].status, "incomplete(infinite domain)");
            }
            other => panic!("expected Sat, got {other:?}"),
        }
    }

    #[test]
    fn solve_square_needs_no_enumeration_report() {
        match solve_text("x*x = 10000") {
            SolveResult::Sat { witness, report } => {
                let x = witness["x"];
                assert!(x == 100 || x == -100);
                assert_eq!(report.scopes[0].status, "none");
            }
            other => panic!("expected Sat, got {other:?}"),
        }
    }

    #[test]
    fn solve_weak_square_product_hits_budget() {
        let r = solve_text("x > 10000 & x mod 1234 = 1 & x*x = 10*x");
        match r {
            SolveResult::Unknown { reason, .. } => {
                assert_eq!(reason, UnknownReason::BudgetExhausted)
            }
            other => panic!("expected Unknown, got {other:?}"),
        }
    }

    #[test]
    fn solve_exhaustive_universal_refutes() {
        match solve_text("y = 2 & forall(x, x in 0..10 => x > y)") {
            SolveResult::Unsat { report } => {
                let uni = report
                    .scopes
                    .iter()
                    .find(|s| s.kind == ScopeKind::Universal)
                    .expect("universal scope reported");
                assert_eq!(uni.status, "exhaustive");
            }
            other => panic!("expected Unsat, got {other:?}"),
        }
    }

    #[test]
    fn nested_scopes_left_example() {
        match solve_text("exists(x, x in -10..10 & forall(y, y in -15..5 => y <= x))") {
            SolveResult::Sat { witness, report } => {
                assert_eq!(witness.get("x"), Some(&5));
                assert!(evaluate_with_hints(
                    &parse("exists(x, x in -10..10 & forall(y, y in -15..5 => y <= x))").unwrap(),
                    &Assignment::new(),
                    &[("x".to_string(), 5)],
                )
                .unwrap());
                let x = &report.scopes[0];
                assert_eq!(x.status, "exhaustive-capable (stopped early)");
                let y = &report.scopes[1];
                assert_eq!(y.kind, ScopeKind::Universal);
                assert_eq!(y.status, "exhaustive");
            }
            other => panic!("expected Sat, got {other:?}"),
        }
    }

    #[test]
    fn nested_scopes_right_example() {
        match solve_text("exists(x, not(forall(y, y in -15..5 => y <= x)))") {
            SolveResult::Sat { witness, .. } => {
                let x = witness["x"];
                assert_eq!(x, 0);
                assert!(x <= 4);
            }
            other => panic!("expected Sat, got {other:?}"),
        }
    }

    #[test]
    fn aborted_universal_is_unknown() {
        match solve_text("forall(x, x > 0 => x * x > 0)") {
            SolveResult::Unknown { reason, .. } => {
                assert_eq!(reason, UnknownReason::UniversalInfinite)
            }
            other => panic!("expected Unknown, got {other:?}"),
        }
    }

    #[test]
    fn rules_refute_cyclic_inequalities_without_enumeration() {
        for text in [
            "x > y & y > x",
            "w > x & x > y & y > z & z > w",
            "x > y & y > x + 1",
            "x + 2 > y + 1 & y > x",
        ] {
            match solve(&parse(text).unwrap(), &cfg()).unwrap() {
                SolveResult::Unsat { report } => {
                    assert_eq!(report.total_trials, 0, "{text} enumerated");
                }
                other => panic!("{text}: expected Unsat, got {other:?}"),
            }
            let off = SolverConfig {
                rules_enabled: false,
                budget: 500,
                ..cfg()
            };
            match solve(&parse(text).unwrap(), &off).unwrap() {
                SolveResult::Unknown { .. } => {}
                other => panic!("{text} without rules: expected Unknown, got {other:?}"),
            }
        }
    }

    #[test]
    fn all_solutions_square() {
        let all = solve_all(&parse("x*x = 10000").unwrap(), &cfg()).unwrap();
        assert!(all.complete);
        let xs: Vec<i64> = all.solutions.iter().map(|a| a["x"]).collect();
        assert_eq!(xs, vec![-100, 100]);
    }

    #[test]
    fn all_solutions_mod_is_incomplete() {
        let all = solve_all(&parse("x > 10000 & x mod 1234 = 1").unwrap(), &cfg()).unwrap();
        assert!(!all.complete);
        assert_eq!(all.reason, Some(UnknownReason::InfiniteDomain));
        assert!(all.solutions.iter().any(|a| a["x"] == 11107));
    }

    #[test]
    fn division_by_zero_surfaces() {
        assert_eq!(
            solve(&parse("x / 0 = 1").unwrap(), &cfg()),
            Err(EngineError::DivisionByZero)
        );
    }

    #[test]
    fn disjunction_branches() {
        match solve_text("x in 5..9 & (x = 7 or x = 12)") {
            SolveResult::Sat { witness, .. } => assert_eq!(witness["x"], 7),
            other => panic!("expected Sat, got {other:?}"),
        }
        assert!(matches!(
            solve_text("x in 5..9 & (x = 4 or x = 12)"),
            SolveResult::Unsat { .. }
        ));
    }

    #[test]
    fn timeout_reports_unknown() {
        let slow = SolverConfig {
            timeout_ms: Some(0),
            ..cfg()
        };
        match solve(&parse("x > 10000 & x mod 1234 = 1").unwrap(), &slow).unwrap() {
            SolveResult::Unknown { reason, .. } => assert_eq!(reason, UnknownReason::Timeout),
            other => panic!("expected Unknown(timeout), got {other:?}"),
        }
    }
}
