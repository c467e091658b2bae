//! Value-selection strategies for existential labeling and the exhaustive
//! sweep used by universal checks.

use crate::domain::{Bound, Domain};
use crate::feistel::{mix64, perm_next, perm_setup, PermState};
use serde::Serialize;

/// How candidate values are drawn from a domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// 0, 1, -1, 2, -2, ... filtered and clamped to the domain.
    AlternatingFromZero,
    AscendingUp,
    DescendingDown,
    /// Keyed Feistel permutation; requires a finite domain and silently
    /// falls back to alternating otherwise.
    RandomPermutation,
}

/// A single-consumer candidate stream over a domain.
#[derive(Debug, Clone)]
pub struct ValueStream {
    inner: StreamKind,
    /// strategy could not be honored (infinite domain) and alternating
    /// enumeration was used instead
    pub fell_back: bool,
}

#[derive(Debug, Clone)]
enum StreamKind {
    Alt(AltState),
    Seq { values: Vec<i64>, next: usize },
    Perm(PermState),
    PermSet { state: PermState, values: Vec<i64> },
}

/// Alternating enumerator state over an interval. Starting from zero it
/// alternates between the positive and negative side of a growing counter,
/// skipping values outside the domain; once one bound is passed only the
/// other side advances, and both passed means the domain is exhausted.
#[derive(Debug, Clone)]
pub struct AltState {
    lo: Bound,
    hi: Bound,
    next_up: Option<i64>,
    next_down: Option<i64>,
}

impl AltState {
    fn new(lo: Bound, hi: Bound) -> AltState {
        // clamped start: jump straight to the nearest in-domain value
        let (next_up, next_down) = match (lo, hi) {
            (Bound::Fin(a), _) if a > 0 => (Some(a), None),
            (_, Bound::Fin(b)) if b < 0 => (None, Some(b)),
            _ => (Some(0), Some(-1)),
        };
        AltState { lo, hi, next_up, next_down }
    }

    fn next(&mut self) -> Option<i64> {
        loop {
            if let Some(u) = self.next_up {
                if Bound::Fin(u) > self.hi {
                    self.next_up = None;
                }
            }
            if let Some(d) = self.next_down {
                if Bound::Fin(d) < self.lo {
                    self.next_down = None;
                }
            }
            match (self.next_up, self.next_down) {
                (None, None) => return None,
                (Some(u), None) => {
                    self.next_up = u.checked_add(1);
                    if Bound::Fin(u) >= self.lo {
                        return Some(u);
                    }
                }
                (None, Some(d)) => {
                    self.next_down = d.checked_sub(1);
                    if Bound::Fin(d) <= self.hi {
                        return Some(d);
                    }
                }
                (Some(u), Some(d)) => {
                    // nearest to zero first; on equal magnitude the
                    // positive side goes first: 0, 1, -1, 2, -2, ...
                    if u.unsigned_abs() <= d.unsigned_abs() {
                        self.next_up = u.checked_add(1);
                        if Bound::Fin(u) >= self.lo {
                            return Some(u);
                        }
                    } else {
                        self.next_down = d.checked_sub(1);
                        if Bound::Fin(d) <= self.hi {
                            return Some(d);
                        }
                    }
                }
            }
        }
    }
}

/// Emits the elements of `d` starting from zero, alternating sides.
/// Finite sets are visited nearest-to-zero first, positive before negative
/// on ties.
pub fn alternating_stream(d: &Domain) -> ValueStream {
    let inner = match d {
        Domain::Empty => StreamKind::Seq { values: Vec::new(), next: 0 },
        Domain::Finite(vs) => {
            let mut values = vs.clone();
            values.sort_by_key(|v| (v.unsigned_abs(), *v < 0));
            StreamKind::Seq { values, next: 0 }
        }
        Domain::Interval(lo, hi) => StreamKind::Alt(AltState::new(*lo, *hi)),
    };
    ValueStream { inner, fell_back: false }
}

impl ValueStream {
    /// Builds a stream over `d` for the given strategy. `key` selects the
    /// permutation for [`Strategy::RandomPermutation`].
    pub fn new(strategy: Strategy, d: &Domain, key: u64) -> ValueStream {
        match strategy {
            Strategy::AlternatingFromZero => alternating_stream(d),
            Strategy::AscendingUp => match d {
                Domain::Empty => empty_stream(),
                Domain::Finite(vs) => seq(vs.clone()),
                Domain::Interval(Bound::Fin(a), hi) => {
                    ValueStream {
                        inner: StreamKind::Alt(AltState {
                            lo: Bound::Fin(*a),
                            hi: *hi,
                            next_up: Some(*a),
                            next_down: None,
                        }),
                        fell_back: false,
                    }
                }
                Domain::Interval(_, _) => fallback(d),
            },
            Strategy::DescendingDown => match d {
                Domain::Empty => empty_stream(),
                Domain::Finite(vs) => {
                    let mut values = vs.clone();
                    values.reverse();
                    seq(values)
                }
                Domain::Interval(lo, Bound::Fin(b)) => ValueStream {
                    inner: StreamKind::Alt(AltState {
                        lo: *lo,
                        hi: Bound::Fin(*b),
                        next_up: None,
                        next_down: Some(*b),
                    }),
                    fell_back: false,
                },
                Domain::Interval(_, _) => fallback(d),
            },
            Strategy::RandomPermutation => match d {
                Domain::Empty => empty_stream(),
                Domain::Finite(vs) => {
                    let state = perm_setup(0, vs.len() as i64 - 1, key)
                        .expect("finite set fits the permutation width");
                    ValueStream {
                        inner: StreamKind::PermSet { state, values: vs.clone() },
                        fell_back: false,
                    }
                }
                Domain::Interval(Bound::Fin(a), Bound::Fin(b)) => match perm_setup(*a, *b, key) {
                    Ok(state) => ValueStream { inner: StreamKind::Perm(state), fell_back: false },
                    Err(_) => fallback(d),
                },
                Domain::Interval(_, _) => fallback(d),
            },
        }
    }

    pub fn next(&mut self) -> Option<i64> {
        match &mut self.inner {
            StreamKind::Alt(st) => st.next(),
            StreamKind::Seq { values, next } => {
                let v = values.get(*next).copied();
                *next += 1;
                v
            }
            StreamKind::Perm(st) => perm_next(st),
            StreamKind::PermSet { state, values } => {
                perm_next(state).map(|idx| values[idx as usize])
            }
        }
    }
}

fn empty_stream() -> ValueStream {
    ValueStream { inner: StreamKind::Seq { values: Vec::new(), next: 0 }, fell_back: false }
}

fn seq(values: Vec<i64>) -> ValueStream {
    ValueStream { inner: StreamKind::Seq { values, next: 0 }, fell_back: false }
}

fn fallback(d: &Domain) -> ValueStream {
    let mut s = alternating_stream(d);
    s.fell_back = true;
    s
}

/// Derives the permutation key for a scope from the run seed.
pub fn perm_key(seed: u64, scope_ordinal: u64) -> u64 {
    mix64(seed ^ mix64(scope_ordinal.wrapping_add(0x5851_F42D_4C95_7F2D)))
}

/// Outcome of a universal sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UniversalOutcome {
    Holds,
    Counterexample(i64),
    AbortInfinite,
    /// a per-value check could not be decided
    Inconclusive,
    BudgetExhausted,
}

/// Per-value verdict supplied by the caller's check function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckVerdict {
    Holds,
    Fails,
    Undecided,
}

/// Sweeps every value of `d`, asking `check` whether the quantified body
/// holds there. The first failing value is a counterexample. Infinite
/// domains abort immediately: they would have to be enumerated in full.
pub fn check_universal(
    d: &Domain,
    mut budget: u64,
    mut check: impl FnMut(i64) -> CheckVerdict,
) -> UniversalOutcome {
    if !d.is_finite() {
        return UniversalOutcome::AbortInfinite;
    }
    for v in d.iter_ascending() {
        if budget == 0 {
            return UniversalOutcome::BudgetExhausted;
        }
        budget -= 1;
        match check(v) {
            CheckVerdict::Holds => {}
            CheckVerdict::Fails => return UniversalOutcome::Counterexample(v),
            CheckVerdict::Undecided => return UniversalOutcome::Inconclusive,
        }
    }
    UniversalOutcome::Holds
}
