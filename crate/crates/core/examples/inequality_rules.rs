//! Committed-choice inequality rules: cyclic chains of strict inequalities
//! over unbounded domains are refuted by transitive closure, without trying
//! a single value. Bounds propagation alone can only answer Unknown here.

use infdom::engine::{solve, SolverConfig};
use infdom::lang::parse;
use infdom::scope::SolveResult;

fn demo(text: &str) {
    let p = parse(text).unwrap();
    let with_rules = SolverConfig::default();
    let without_rules = SolverConfig { rules_enabled: false, budget: 1000, ..SolverConfig::default() };
    let describe = |r: &SolveResult| match r {
        SolveResult::Sat { witness, .. } => {
            let w: Vec<String> = witness.iter().map(|(k, v)| format!("{k}={v}")).collect();
            format!("SAT {}", w.join(" "))
        }
        SolveResult::Unsat { report } => format!("UNSAT ({} trials)", report.total_trials),
        SolveResult::Unknown { reason, .. } => format!("UNKNOWN reason={reason}"),
    };
    println!("?- {text}");
    println!("   rules on:  {}", describe(&solve(&p, &with_rules).unwrap()));
    println!("   rules off: {}", describe(&solve(&p, &without_rules).unwrap()));
    println!();
}

fn main() {
    demo("x > y & y > x");
    demo("w > x & x > y & y > z & z > w");
    demo("x > y & y > x + 1");
    demo("x + 2 > y + 1 & y > x");
    // satisfiable chains still solve with the rules enabled
    demo("x = 3 & x < y");
}
