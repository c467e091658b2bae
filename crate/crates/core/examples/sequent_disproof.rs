//! Sequent disproof: a sequent H1, ..., Hn |- G is attacked by searching
//! for a valuation that satisfies every hypothesis and falsifies the goal.
//! An exhaustive failed search is a proof of the sequent.

use infdom::cli::{run_sequent, CliConfig};
use std::io;

fn demo(hyps: &[&str], goal: &str) {
    println!("{} |- {goal}", hyps.join("; "));
    let mut out = io::stdout();
    let mut err = io::stderr();
    run_sequent(hyps, goal, &CliConfig::default(), &mut out, &mut err).unwrap();
    println!();
}

fn main() {
    demo(&["x in 0..10"], "x >= 0");
    demo(&["x in 0..10"], "x > 0");
    // x = 1 disproves the tempting claim that squaring always grows
    demo(&["x > 0"], "x*x > x");
}
