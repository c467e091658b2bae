//! All-solutions mode: the solution set is reported as complete only when
//! every enumeration was exhaustive.

use infdom::engine::{solve_all, SolverConfig};
use infdom::lang::parse;

fn demo(text: &str) {
    let p = parse(text).unwrap();
    let all = solve_all(&p, &SolverConfig::default()).unwrap();
    let xs: Vec<String> = all.solutions.iter().map(|a| a["x"].to_string()).collect();
    print!("{{x | {text}}} ");
    if all.complete {
        println!("= {{{}}}", xs.join(", "));
    } else {
        println!(
            "is incomplete ({}); found so far: {{{}}}",
            all.reason.unwrap(),
            xs.join(", ")
        );
    }
}

fn main() {
    demo("x*x = 10000");
    demo("x in 1..3");
    // the domain stays infinite: every 1234th value matches forever
    demo("x > 10000 & x mod 1234 = 1");
}
