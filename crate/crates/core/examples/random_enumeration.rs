//! Randomized value ordering: candidates are drawn in keyed-permutation
//! order, so different seeds explore differently while any fixed seed
//! replays byte-identically. Verdicts never depend on the order.

use infdom::engine::{solve, SolverConfig};
use infdom::enumerate::Strategy;
use infdom::lang::parse;
use infdom::scope::SolveResult;

fn main() {
    let p = parse("x in -50..50 & x*x > 2000").unwrap();
    for seed in [0u64, 1, 42] {
        let cfg = SolverConfig {
            strategy: Strategy::RandomPermutation,
            seed,
            ..SolverConfig::default()
        };
        match solve(&p, &cfg).unwrap() {
            SolveResult::Sat { witness, report } => println!(
                "seed {seed}: SAT x={} after {} rejected candidates",
                witness["x"],
                report.total_trials - 1
            ),
            other => println!("seed {seed}: {other:?}"),
        }
    }
}
