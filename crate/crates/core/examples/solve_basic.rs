//! Three-valued solving over unbounded integer domains: a witness when one
//! exists, a refutation only when the search was exhaustive, and an honest
//! Unknown otherwise.

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
                println!("   enumeration: {} ({})", s.status, s.var.as_deref().unwrap_or("_"));
            }
        }
        SolveResult::Unsat { .. } => println!("   UNSAT"),
        SolveResult::Unknown { reason, .. } => println!("   UNKNOWN reason={reason}"),
    }
    println!();
}

fn main() {
    // narrowed to {-100, 100} by propagation alone
    demo("x*x = 10000");
    // no integer square root: refuted without enumerating
    demo("x*x = 10001");
    // infinite domain, but the first candidate of the residue class works
    demo("x > 10000 & x mod 1234 = 1");
    // propagation cannot close this and no candidate survives: Unknown
    demo("x > 10000 & x mod 1234 = 1 & x*x = 10*x");
}
