//! End-to-end acceptance checks, one test (and one pass/fail line) per
//! guaranteed behavior.

use infdom::cli::{run_solve, CliConfig};
use infdom::domain::Domain;
use infdom::engine::{solve, solve_all, SolverConfig};
use infdom::enumerate::{Strategy, ValueStream};
use infdom::feistel::{feistel_decrypt, feistel_encrypt, perm_setup};
use infdom::lang::{evaluate, evaluate_with_hints, parse, Assignment, BinOp, CmpOp, Expr, Pred};
use infdom::scope::{ScopeKind, SolveResult, UnknownReason};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

fn timed<T>(limit: Duration, f: impl FnOnce() -> T) -> T {
    let t0 = Instant::now();
    let r = f();
    let elapsed = t0.elapsed();
    assert!(elapsed < limit, "took {elapsed:?}, limit {limit:?}");
    r
}

fn solve_text(text: &str, cfg: &SolverConfig) -> SolveResult {
    solve(&parse(text).unwrap(), cfg).unwrap()
}

/// Squares, residue classes and a budget-bounded Unknown: every verdict
/// exact, every call under a second.
#[test]
fn basic_verdict_suite() {
    let second = Duration::from_secs(1);

    let r = timed(second, || solve_text("x*x = 10000", &cfg()));
    match &r {
        SolveResult::Sat { witness, report } => {
            assert!(witness["x"] == 100 || witness["x"] == -100);
            assert_eq!(report.scopes[0].status, "none");
        }
        other => panic!("x*x = 10000: expected Sat, got {other:?}"),
    }

    let all = timed(second, || {
        solve_all(&parse("x*x = 10000").unwrap(), &cfg()).unwrap()
    });
    assert!(all.complete);
    let xs: Vec<i64> = all.solutions.iter().map(|a| a["x"]).collect();
    assert_eq!(xs, vec![-100, 100]);

    let r = timed(second, || solve_text("x > 10000 & x mod 1234 = 1", &cfg()));
    match &r {
        SolveResult::Sat { witness, report } => {
            assert_eq!(witness["x"], 11107);
            assert!(report.scopes[0].status.starts_with("incomplete"));
        }
        other => panic!("residue class: expected Sat, got {other:?}"),
    }

    let all = timed(second, || {
        solve_all(&parse("x > 10000 & x mod 1234 = 1").unwrap(), &cfg()).unwrap()
    });
    assert!(!all.complete);
    assert_eq!(all.reason, Some(UnknownReason::InfiniteDomain));

    let r = timed(second, || solve_text("x*x = 10001", &cfg()));
    match &r {
        SolveResult::Unsat { report } => assert_eq!(report.scopes[0].status, "none"),
        other => panic!("x*x = 10001: expected Unsat, got {other:?}"),
    }

    let r = timed(second, || {
        solve_text("x > 10000 & x mod 1234 = 1 & x*x = 10*x", &cfg())
    });
    match &r {
        SolveResult::Unknown { reason, report } => {
            assert_eq!(*reason, UnknownReason::BudgetExhausted);
            assert_eq!(report.total_trials, 10_000);
        }
        other => panic!("budget case: expected Unknown, got {other:?}"),
    }

    println!("PASS: basic verdict suite (squares, residue class, budget)");
}

/// The nested-quantifier pair: dominance and its negation, witnesses
/// re-verified by the ground evaluator.
#[test]
fn quantifier_pair() {
    let left = "exists(x, x in -10..10 & forall(y, y in -15..5 => y <= x))";
    match solve_text(left, &cfg()) {
        SolveResult::Sat { witness, .. } => {
            let x = witness["x"];
            assert!((5..=10).contains(&x));
            assert_eq!(x, 5, "alternating enumeration reaches 5 first");
            let hints: Vec<(String, i64)> =
                witness.iter().map(|(k, v)| (k.clone(), *v)).collect();
            assert_eq!(
                evaluate_with_hints(&parse(left).unwrap(), &Assignment::new(), &hints),
                Ok(true)
            );
        }
        other => panic!("left: expected Sat, got {other:?}"),
    }

    let right = "exists(x, not(forall(y, y in -15..5 => y <= x)))";
    match solve_text(right, &cfg()) {
        SolveResult::Sat { witness, .. } => {
            let x = witness["x"];
            assert!(x <= 4);
            assert_eq!(x, 0, "alternating enumeration starts at 0");
            let hints: Vec<(String, i64)> =
                witness.iter().map(|(k, v)| (k.clone(), *v)).collect();
            assert_eq!(
                evaluate_with_hints(&parse(right).unwrap(), &Assignment::new(), &hints),
                Ok(true)
            );
        }
        other => panic!("right: expected Sat, got {other:?}"),
    }

    println!("PASS: nested quantifier pair with evaluator-verified witnesses");
}

/// A bounded universal is swept in full, so its failure is a refutation,
/// not an Unknown.
#[test]
fn exhaustive_universal_refutation() {
    match solve_text("y = 2 & forall(x, x in 0..10 => x > y)", &cfg()) {
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
    println!("PASS: exhaustive universal sweep yields Unsat, not Unknown");
}

/// Cyclic strict inequalities over unbounded domains: refuted by the rule
/// store without a single value trial; Unknown without it. Satisfiable and
/// domain-refutable chains behave identically either way.
#[test]
fn inequality_rule_patterns() {
    let on = cfg();
    let off = SolverConfig { rules_enabled: false, ..cfg() };

    for text in [
        "x > y & y > x",
        "w > x & x > y & y > z & z > w",
        "x > y & y > x + 1",
        "x + 2 > y + 1 & y > x",
    ] {
        match solve_text(text, &on) {
            SolveResult::Unsat { report } => {
                assert_eq!(report.total_trials, 0, "{text}: enumerated with rules on");
            }
            other => panic!("{text} with rules: expected Unsat, got {other:?}"),
        }
        match solve_text(text, &off) {
            SolveResult::Unknown { .. } => {}
            other => panic!("{text} without rules: expected Unknown, got {other:?}"),
        }
    }

    for (text, sat) in [
        ("x > 3", true),
        ("x = 3 & x < y", true),
        ("x = 3 & x > y & y = 4", false),
        ("w > x & x > y & y > z & w = 1 & z = 1", false),
    ] {
        for c in [&on, &off] {
            let r = solve_text(text, c);
            match (sat, &r) {
                (true, SolveResult::Sat { .. }) | (false, SolveResult::Unsat { .. }) => {}
                _ => panic!("{text} (rules={}): got {r:?}", c.rules_enabled),
            }
        }
    }

    println!("PASS: inequality rule patterns (cycles refuted without enumeration)");
}

/// Keyed permutations: complete, duplicate-free coverage of random
/// intervals; the worked small-interval setup; block cipher round-trips.
#[test]
fn permutation_suite() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let lo = rng.gen_range(-1_000_000i64..1_000_000);
        let width = rng.gen_range(0i64..10_000);
        let hi = lo + width;
        let key = rng.gen();
        let mut s = ValueStream::new(
            Strategy::RandomPermutation,
            &Domain::interval(
                infdom::domain::Bound::Fin(lo),
                infdom::domain::Bound::Fin(hi),
            ),
            key,
        );
        assert!(!s.fell_back);
        let mut got = Vec::with_capacity(width as usize + 1);
        while let Some(v) = s.next() {
            got.push(v);
        }
        assert_eq!(got.len() as i64, width + 1, "draw count != interval size");
        assert_eq!(s.next(), None, "stream not exhausted after |interval| draws");
        let mut sorted = got;
        sorted.sort_unstable();
        let expect: Vec<i64> = (lo..=hi).collect();
        assert_eq!(sorted, expect, "not a permutation of [{lo}, {hi}]");
    }

    let st = perm_setup(1, 6, 12345).unwrap();
    assert_eq!((st.n, st.bl, st.br), (4, 12, 3));

    for n in [2u32, 4, 8, 16] {
        let st = perm_setup(0, (1i64 << n) - 1, 0xC0FF_EE00 + n as u64).unwrap();
        assert_eq!(st.n, n);
        for idx in 0..(1u64 << n) {
            assert_eq!(feistel_decrypt(feistel_encrypt(idx, &st), &st), idx);
        }
    }

    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(30), "suite took {elapsed:?}");
    println!("PASS: permutation suite (coverage, worked setup, round-trips)");
}

// ---- random predicate generator for the soundness checks ----

const VARS: [&str; 3] = ["x", "y", "z"];

fn small_expr(rng: &mut ChaCha8Rng, vars: &[&str]) -> Expr {
    match rng.gen_range(0..5) {
        0 => Expr::Int(rng.gen_range(-20..=20)),
        1 | 2 => Expr::Var(vars[rng.gen_range(0..vars.len())].to_string()),
        3 => Expr::Bin(
            if rng.gen() { BinOp::Add } else { BinOp::Sub },
            Box::new(Expr::Var(vars[rng.gen_range(0..vars.len())].to_string())),
            Box::new(Expr::Int(rng.gen_range(-10..=10))),
        ),
        _ => Expr::Bin(
            BinOp::Mul,
            Box::new(Expr::Var(vars[rng.gen_range(0..vars.len())].to_string())),
            Box::new(Expr::Var(vars[rng.gen_range(0..vars.len())].to_string())),
        ),
    }
}

fn atom(rng: &mut ChaCha8Rng, vars: &[&str]) -> Pred {
    let ops = [CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge];
    Pred::Cmp(
        ops[rng.gen_range(0..ops.len())],
        small_expr(rng, vars),
        small_expr(rng, vars),
    )
}

fn guard(v: &str) -> Pred {
    Pred::In(v.to_string(), Expr::Int(-15), Expr::Int(15))
}

fn body(rng: &mut ChaCha8Rng, vars: &[&str], depth: u32, quant: &mut u32) -> Pred {
    if depth == 0 {
        return atom(rng, vars);
    }
    match rng.gen_range(0..8) {
        0 | 1 => Pred::And(
            Box::new(body(rng, vars, depth - 1, quant)),
            Box::new(body(rng, vars, depth - 1, quant)),
        ),
        2 | 3 => Pred::Or(
            Box::new(body(rng, vars, depth - 1, quant)),
            Box::new(body(rng, vars, depth - 1, quant)),
        ),
        4 => Pred::Not(Box::new(body(rng, vars, depth - 1, quant))),
        5 => Pred::Implies(
            Box::new(body(rng, vars, depth - 1, quant)),
            Box::new(body(rng, vars, depth - 1, quant)),
        ),
        6 if *quant < 2 => {
            *quant += 1;
            let q = format!("q{quant}");
            let mut inner: Vec<&str> = vars.to_vec();
            let q_leaked: &str = Box::leak(q.clone().into_boxed_str());
            inner.push(q_leaked);
            let b = body(rng, &inner, depth - 1, quant);
            if rng.gen() {
                Pred::Forall(q.clone(), Box::new(Pred::Implies(Box::new(guard(&q)), Box::new(b))))
            } else {
                Pred::Exists(q.clone(), Box::new(Pred::And(Box::new(guard(&q)), Box::new(b))))
            }
        }
        _ => atom(rng, vars),
    }
}

fn random_pred(rng: &mut ChaCha8Rng) -> (Pred, Vec<&'static str>) {
    let nvars = rng.gen_range(1..=3);
    let vars: Vec<&'static str> = VARS[..nvars].to_vec();
    let mut p = body(rng, &vars, 2, &mut 0);
    for v in &vars {
        p = Pred::And(Box::new(guard(v)), Box::new(p));
    }
    (p, vars)
}

fn brute_force_model(p: &Pred, vars: &[&str]) -> Option<Assignment> {
    let mut asg = Assignment::new();
    fn rec(p: &Pred, vars: &[&str], asg: &mut Assignment) -> Option<Assignment> {
        let Some((v, rest)) = vars.split_first() else {
            return match evaluate(p, asg) {
                Ok(true) => Some(asg.clone()),
                _ => None,
            };
        };
        for val in -15..=15 {
            asg.insert(v.to_string(), val);
            if let Some(m) = rec(p, rest, asg) {
                return Some(m);
            }
        }
        asg.remove(*v);
        None
    }
    rec(p, vars, &mut asg)
}

/// 1,000 random bounded predicates: every Sat witness re-evaluates true,
/// every Unsat is confirmed by brute force, and Unknown only ever appears
/// together with an incomplete or aborted scope.
#[test]
fn soundness_fuzzing() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20_26);
    let cfg = SolverConfig { budget: 40_000, ..cfg() };
    let (mut sat, mut unsat, mut unknown) = (0u32, 0u32, 0u32);
    for i in 0..1000 {
        let (p, vars) = random_pred(&mut rng);
        let r = solve(&p, &cfg).unwrap_or_else(|e| panic!("#{i} {p}: engine error {e}"));
        match &r {
            SolveResult::Sat { witness, .. } => {
                sat += 1;
                let hints: Vec<(String, i64)> =
                    witness.iter().map(|(k, v)| (k.clone(), *v)).collect();
                assert_eq!(
                    evaluate_with_hints(&p, witness, &hints),
                    Ok(true),
                    "#{i} {p}: witness {witness:?} does not satisfy the predicate"
                );
            }
            SolveResult::Unsat { .. } => {
                unsat += 1;
                if let Some(m) = brute_force_model(&p, &vars) {
                    panic!("#{i} {p}: claimed Unsat but {m:?} is a model");
                }
            }
            SolveResult::Unknown { report, .. } => {
                unknown += 1;
                assert!(
                    report.scopes.iter().any(|s| s.status.starts_with("incomplete")
                        || s.status.starts_with("aborted")),
                    "#{i} {p}: Unknown without an incomplete/aborted scope"
                );
            }
        }
    }
    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(60), "fuzzing took {elapsed:?}");
    assert!(sat > 100 && unsat > 100, "degenerate mix: {sat}/{unsat}/{unknown}");
    println!("PASS: soundness fuzzing (sat {sat}, unsat {unsat}, unknown {unknown})");
}

/// Same seed: byte-identical output. Different seeds: different candidate
/// order, same verdicts.
#[test]
fn determinism() {
    let texts = [
        "x in -50..50 & x*x > 2000",
        "x in -200..200 & x mod 7 = 3 & x > 50",
        "x in 1..100 & y in 1..100 & x * y = 91",
    ];
    let render = |seed: u64| {
        let cli = CliConfig {
            strategy: Strategy::RandomPermutation,
            seed,
            ..CliConfig::default()
        };
        let mut out = Vec::new();
        let mut err = Vec::new();
        for t in texts {
            run_solve(t, &cli, &mut out, &mut err).unwrap();
        }
        (out, err)
    };
    assert_eq!(render(42), render(42), "seed 42 runs differ");

    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut order_changed = false;
    for _ in 0..100 {
        let (p, _) = random_pred(&mut rng);
        let verdict = |seed: u64| {
            let c = SolverConfig {
                strategy: Strategy::RandomPermutation,
                seed,
                budget: 40_000,
                ..cfg()
            };
            solve(&p, &c).unwrap()
        };
        let (a, b) = (verdict(1), verdict(2));
        let kind = |r: &SolveResult| match r {
            SolveResult::Sat { .. } => 0,
            SolveResult::Unsat { .. } => 1,
            SolveResult::Unknown { .. } => 2,
        };
        assert_eq!(kind(&a), kind(&b), "{p}: verdict depends on the seed");
        if a.report().total_trials != b.report().total_trials {
            order_changed = true;
        }
    }
    assert!(order_changed, "different seeds never changed the candidate order");
    println!("PASS: determinism (byte-identical replays, seed-independent verdicts)");
}
