//! Universal quantifiers checked by exhaustive sweeps, and negation pushed
//! through quantifiers: `not(forall(...))` becomes a counterexample search.

use infdom::engine::{solve, SolverConfig};
use infdom::lang::parse;
use infdom::scope::SolveResult;

fn demo(text: &str) {
    let p = parse(text).unwrap();
    println!("?- {text}");
    match solve(&p, &SolverConfig::default()).unwrap() {
        SolveResult::Sat { witness, report } => {
            let w: Vec<String> = witness.iter().map(|(k, v)| format!("{k}={v}")).collect();
            println!("   SAT {}", w.join(" "));
            for s in &report.scopes {
                println!(
                    "   enumeration: {} ({:?} {})",
                    s.status,
                    s.kind,
                    s.var.as_deref().unwrap_or("_")
                );
            }
        }
        SolveResult::Unsat { report } => {
            println!("   UNSAT");
            for s in &report.scopes {
                println!(
                    "   enumeration: {} ({:?} {})",
                    s.status,
                    s.kind,
                    s.var.as_deref().unwrap_or("_")
                );
            }
        }
        SolveResult::Unknown { reason, .. } => println!("   UNKNOWN reason={reason}"),
    }
    println!();
}

fn main() {
    // x = 5 is the first value dominating all of -15..5
    demo("exists(x, x in -10..10 & forall(y, y in -15..5 => y <= x))");
    // negation dual: some y exceeds x; x = 0, y = 1 found immediately
    demo("exists(x, not(forall(y, y in -15..5 => y <= x)))");
    // the sweep over 0..10 finds the counterexample x = 0: a real refutation
    demo("y = 2 & forall(x, x in 0..10 => x > y)");
    // an unbounded universal cannot be swept; the verdict stays Unknown
    demo("forall(x, x > 0 => x * x > 0)");
}
