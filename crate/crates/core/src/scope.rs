//! Tracking in which quantifier scope each enumeration occurs and whether
//! it was exhaustive, and classifying the overall verdict from that record.
//!
//! A found valuation is sound regardless of incomplete enumeration, because
//! incomplete enumeration is only ever permitted in existential scopes. A
//! "no valuation found" outcome is only a definite refutation when every
//! enumeration on every explored branch was exhaustive (or absent).

use crate::lang::Assignment;
use serde::Serialize;
use std::fmt;

pub type ScopeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScopeKind {
    Existential,
    Universal,
}

/// Why an enumeration could not be exhaustive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IncompleteReason {
    InfiniteDomain,
    BudgetExhausted,
}

impl fmt::Display for IncompleteReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IncompleteReason::InfiniteDomain => write!(f, "infinite domain"),
            IncompleteReason::BudgetExhausted => write!(f, "budget"),
        }
    }
}

/// Per-scope enumeration exhaustiveness. Ordered for joining:
/// `NoEnumeration ⊑ Exhaustive ⊑ Incomplete`, with `Incomplete` absorbing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EnumStatus {
    #[default]
    NoEnumeration,
    Exhaustive,
    Incomplete(IncompleteReason),
}

impl EnumStatus {
    /// Least upper bound; the first incomplete reason is kept.
    pub fn join(self, other: EnumStatus) -> EnumStatus {
        use EnumStatus::*;
        match (self, other) {
            (Incomplete(r), _) => Incomplete(r),
            (_, Incomplete(r)) => Incomplete(r),
            (Exhaustive, _) | (_, Exhaustive) => Exhaustive,
            _ => NoEnumeration,
        }
    }

    pub fn is_incomplete(&self) -> bool {
        matches!(self, EnumStatus::Incomplete(_))
    }
}

/// One node of the scope tree.
///
/// `status` describes the current (most recent) activation of the scope;
/// `history` joins every earlier activation. A universal scope may be
/// activated once per candidate of its enclosing existential enumeration,
/// and a Sat verdict must be judged against the accepted activation only,
/// while Unsat must be judged against everything that was explored.
#[derive(Debug, Clone)]
pub struct ScopeNode {
    pub id: ScopeId,
    pub kind: ScopeKind,
    pub var: Option<String>,
    pub parent: Option<ScopeId>,
    pub children: Vec<ScopeId>,
    pub status: EnumStatus,
    pub history: EnumStatus,
    pub aborted: bool,
    pub aborted_history: bool,
    /// stream stopped at a success before being fully drained
    pub stopped_early: bool,
    /// candidates tried and rejected during the current activation
    pub failed_trials: u64,
    /// cumulative value trials, charged against the per-scope budget
    pub trials: u64,
    /// random enumeration was requested but the domain was infinite
    pub fallback: bool,
}

#[derive(Debug, Clone)]
pub struct ScopeTree {
    nodes: Vec<ScopeNode>,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("unknown scope {0}")]
pub struct UnknownScope(pub ScopeId);

use thiserror::Error;

impl ScopeTree {
    /// Creates the tree with its root existential scope.
    pub fn new() -> ScopeTree {
        let root = ScopeNode {
            id: 0,
            kind: ScopeKind::Existential,
            var: None,
            parent: None,
            children: Vec::new(),
            status: EnumStatus::NoEnumeration,
            history: EnumStatus::NoEnumeration,
            aborted: false,
            aborted_history: false,
            stopped_early: false,
            failed_trials: 0,
            trials: 0,
            fallback: false,
        };
        ScopeTree { nodes: vec![root] }
    }

    pub const ROOT: ScopeId = 0;

    pub fn add_child(&mut self, parent: ScopeId, kind: ScopeKind, var: &str) -> ScopeId {
        let id = self.nodes.len();
        self.nodes.push(ScopeNode {
            id,
            kind,
            var: Some(var.to_string()),
            parent: Some(parent),
            children: Vec::new(),
            status: EnumStatus::NoEnumeration,
            history: EnumStatus::NoEnumeration,
            aborted: false,
            aborted_history: false,
            stopped_early: false,
            failed_trials: 0,
            trials: 0,
            fallback: false,
        });
        self.nodes[parent].children.push(id);
        id
    }

    pub fn node(&self, id: ScopeId) -> &ScopeNode {
        &self.nodes[id]
    }

    pub fn node_mut(&mut self, id: ScopeId) -> &mut ScopeNode {
        &mut self.nodes[id]
    }

    pub fn nodes(&self) -> &[ScopeNode] {
        &self.nodes
    }

    /// Joins a status into a scope's current activation record.
    pub fn record(&mut self, id: ScopeId, status: EnumStatus) -> Result<(), UnknownScope> {
        let node = self.nodes.get_mut(id).ok_or(UnknownScope(id))?;
        node.status = node.status.join(status);
        Ok(())
    }

    /// Begins a fresh activation: the previous activation's record moves
    /// into the history join.
    pub fn activate(&mut self, id: ScopeId) {
        let node = &mut self.nodes[id];
        node.history = node.history.join(node.status);
        node.aborted_history |= node.aborted;
        node.status = EnumStatus::NoEnumeration;
        node.aborted = false;
        node.stopped_early = false;
        node.failed_trials = 0;
    }

    /// Marks a universal scope whose variable had an infinite domain at
    /// check time; the enclosing enumeration drops the candidate and
    /// continues.
    pub fn abort_universal(&mut self, id: ScopeId) {
        debug_assert_eq!(self.nodes[id].kind, ScopeKind::Universal);
        self.nodes[id].aborted = true;
    }

    /// Effective status across all activations, for refutation soundness.
    pub fn effective_status(&self, id: ScopeId) -> EnumStatus {
        let n = &self.nodes[id];
        n.history.join(n.status)
    }

    pub fn any_explored_incomplete(&self) -> Option<(ScopeId, IncompleteReason)> {
        for n in &self.nodes {
            if let EnumStatus::Incomplete(r) = self.effective_status(n.id) {
                return Some((n.id, r));
            }
        }
        None
    }

    pub fn any_explored_aborted(&self) -> Option<ScopeId> {
        self.nodes.iter().find(|n| n.aborted || n.aborted_history).map(|n| n.id)
    }
}

impl Default for ScopeTree {
    fn default() -> Self {
        Self::new()
    }
}

/// Why a verdict is `Unknown`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnknownReason {
    InfiniteDomain,
    BudgetExhausted,
    UniversalInfinite,
    Timeout,
}

impl fmt::Display for UnknownReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnknownReason::InfiniteDomain => write!(f, "infinite domain"),
            UnknownReason::BudgetExhausted => write!(f, "budget"),
            UnknownReason::UniversalInfinite => write!(f, "universal quantifier over infinite domain"),
            UnknownReason::Timeout => write!(f, "timeout"),
        }
    }
}

/// Flattened per-scope line of the enumeration report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScopeReport {
    pub kind: ScopeKind,
    pub var: Option<String>,
    /// rendered status: none | exhaustive | exhaustive-capable (stopped
    /// early) | incomplete(<reason>) | aborted(infinite universal)
    pub status: String,
    pub stopped_early: bool,
    /// random enumeration fell back to alternating (infinite domain)
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    #[serde(default)]
    pub fallback: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct EnumReport {
    pub scopes: Vec<ScopeReport>,
    pub total_trials: u64,
}

/// Three-valued verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveResult {
    Sat { witness: Assignment, report: EnumReport },
    Unsat { report: EnumReport },
    Unknown { reason: UnknownReason, report: EnumReport },
}

impl SolveResult {
    pub fn report(&self) -> &EnumReport {
        match self {
            SolveResult::Sat { report, .. }
            | SolveResult::Unsat { report, .. }
            | SolveResult::Unknown { report, .. } => report,
        }
    }
}

/// Classifies the finished (or aborted) search.
///
/// A found valuation is Sat outright. Otherwise the formula is Unsat only
/// when every explored enumeration was exhaustive or absent and no
/// universal check was aborted; anything else is Unknown, carrying the
/// first cause in schedule order (a budget stop overrides, since it is the
/// event that actually ended the search).
pub fn classify(
    tree: &ScopeTree,
    found: Option<Assignment>,
    budget_stopped: bool,
    timed_out: bool,
) -> SolveResult {
    let report = render_report(tree, found.is_some());
    if let Some(witness) = found {
        debug_assert!(accepted_branch_clean(tree));
        return SolveResult::Sat { witness, report };
    }
    if timed_out {
        return SolveResult::Unknown { reason: UnknownReason::Timeout, report };
    }
    let incomplete = tree.any_explored_incomplete();
    let aborted = tree.any_explored_aborted();
    if incomplete.is_none() && aborted.is_none() {
        return SolveResult::Unsat { report };
    }
    let reason = if budget_stopped {
        UnknownReason::BudgetExhausted
    } else {
        match (incomplete, aborted) {
            (Some((sid, r)), Some(aid)) if aid < sid => {
                let _ = r;
                UnknownReason::UniversalInfinite
            }
            (Some((_, IncompleteReason::InfiniteDomain)), _) => UnknownReason::InfiniteDomain,
            (Some((_, IncompleteReason::BudgetExhausted)), _) => UnknownReason::BudgetExhausted,
            (None, Some(_)) => UnknownReason::UniversalInfinite,
            (None, None) => unreachable!(),
        }
    };
    SolveResult::Unknown { reason, report }
}

/// On a Sat verdict, the accepted branch must not carry an incomplete or
/// aborted universal scope.
pub fn accepted_branch_clean(tree: &ScopeTree) -> bool {
    tree.nodes().iter().all(|n| {
        n.kind != ScopeKind::Universal || (!n.status.is_incomplete() && !n.aborted)
    })
}

fn render_report(tree: &ScopeTree, sat: bool) -> EnumReport {
    let mut scopes = Vec::new();
    let mut total_trials = 0;
    for n in tree.nodes() {
        total_trials += n.trials;
        if n.var.is_none() {
            continue; // root carrier node
        }
        // For a Sat verdict the accepted activation describes the result;
        // otherwise everything explored counts.
        let status = if sat { n.status } else { tree.effective_status(n.id) };
        let aborted = if sat { n.aborted } else { n.aborted || n.aborted_history };
        let rendered = if aborted {
            "aborted(infinite universal)".to_string()
        } else {
            match status {
                EnumStatus::Incomplete(r) => format!("incomplete({r})"),
                EnumStatus::Exhaustive => "exhaustive".to_string(),
                EnumStatus::NoEnumeration => {
                    if n.stopped_early && n.failed_trials > 0 {
                        "exhaustive-capable (stopped early)".to_string()
                    } else {
                        "none".to_string()
                    }
                }
            }
        };
        scopes.push(ScopeReport {
            kind: n.kind,
            var: n.var.clone(),
            status: rendered,
            stopped_early: n.stopped_early,
            fallback: n.fallback,
        });
    }
    EnumReport { scopes, total_trials }
}
