//! Batch and REPL front end: solve, all-solutions and sequent-disproof
//! modes with per-scope enumeration reporting.
//!
//! Exit codes: 0 = Sat (or complete set, or counterexample found),
//! 1 = Unsat (or proved), 2 = Unknown/incomplete, 3 = usage or input error.

use crate::engine::{solve, solve_all, SolverConfig};
use crate::enumerate::Strategy;
use crate::lang::{parse, Assignment, Pred};
use crate::scope::{EnumReport, ScopeKind, SolveResult};
use clap::{Parser, ValueEnum};
use serde_json::json;
use std::collections::BTreeSet;
use std::io::{self, BufRead, Write};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Solve,
    All,
    Sequent,
}

/// Front-end configuration, assembled from flags.
#[derive(Debug, Clone)]
pub struct CliConfig {
    pub mode: Mode,
    pub strategy: Strategy,
    pub seed: u64,
    pub budget: u64,
    pub rules: bool,
    pub json: bool,
    pub timeout_ms: Option<u64>,
    /// projection variables for all-solutions mode; defaults to the
    /// predicate's free variables
    pub vars: Option<Vec<String>>,
}

impl Default for CliConfig {
    fn default() -> CliConfig {
        CliConfig {
            mode: Mode::Solve,
            strategy: Strategy::AlternatingFromZero,
            seed: 0,
            budget: 10_000,
            rules: true,
            json: false,
            timeout_ms: None,
            vars: None,
        }
    }
}

impl CliConfig {
    fn solver(&self) -> SolverConfig {
        SolverConfig {
            strategy: self.strategy,
            seed: self.seed,
            budget: self.budget,
            rules_enabled: self.rules,
            timeout_ms: self.timeout_ms,
        }
    }
}

fn kind_word(k: ScopeKind) -> &'static str {
    match k {
        ScopeKind::Existential => "exists",
        ScopeKind::Universal => "forall",
    }
}

fn write_report(out: &mut dyn Write, report: &EnumReport) -> io::Result<()> {
    if report.scopes.is_empty() {
        return writeln!(out, "enumeration: none");
    }
    for s in &report.scopes {
        let var = s.var.as_deref().unwrap_or("_");
        write!(out, "enumeration: {} ({} {var})", s.status, kind_word(s.kind))?;
        if s.fallback {
            write!(out, " [random-enum fell back to alternating]")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

fn witness_text(w: &Assignment) -> String {
    w.iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn json_scopes(report: &EnumReport) -> serde_json::Value {
    serde_json::to_value(&report.scopes).expect("scope report serializes")
}

fn parse_or_report(
    text: &str,
    err: &mut dyn Write,
) -> io::Result<Result<Pred, i32>> {
    match parse(text) {
        Ok(p) => Ok(Ok(p)),
        Err(e) => {
            writeln!(err, "error: {e}")?;
            Ok(Err(3))
        }
    }
}

/// Solves for one witness and prints `SAT`/`UNSAT`/`UNKNOWN`.
pub fn run_solve(
    pred_text: &str,
    cfg: &CliConfig,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> io::Result<(i32, Option<EnumReport>)> {
    let p = match parse_or_report(pred_text, err)? {
        Ok(p) => p,
        Err(code) => return Ok((code, None)),
    };
    let result = match solve(&p, &cfg.solver()) {
        Ok(r) => r,
        Err(e) => {
            writeln!(err, "error: {e}")?;
            return Ok((3, None));
        }
    };
    let report = result.report().clone();
    let code = match &result {
        SolveResult::Sat { witness, .. } => {
            if cfg.json {
                let v = json!({
                    "status": "sat",
                    "witness": witness,
                    "scopes": json_scopes(&report),
                });
                writeln!(out, "{v}")?;
            } else {
                writeln!(out, "SAT {}", witness_text(witness))?;
                write_report(out, &report)?;
            }
            0
        }
        SolveResult::Unsat { .. } => {
            if cfg.json {
                let v = json!({"status": "unsat", "scopes": json_scopes(&report)});
                writeln!(out, "{v}")?;
            } else {
                writeln!(out, "UNSAT")?;
                write_report(out, &report)?;
            }
            1
        }
        SolveResult::Unknown { reason, .. } => {
            if cfg.json {
                let v = json!({
                    "status": "unknown",
                    "reason": reason,
                    "scopes": json_scopes(&report),
                });
                writeln!(out, "{v}")?;
            } else {
                writeln!(out, "UNKNOWN reason={reason}")?;
                write_report(out, &report)?;
            }
            2
        }
    };
    Ok((code, Some(report)))
}

/// Enumerates the solution set projected onto `cfg.vars` (default: the
/// free variables). The set is printed as complete only when every
/// enumeration was exhaustive.
pub fn run_all(
    pred_text: &str,
    cfg: &CliConfig,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> io::Result<(i32, Option<EnumReport>)> {
    let p = match parse_or_report(pred_text, err)? {
        Ok(p) => p,
        Err(code) => return Ok((code, None)),
    };
    let free: Vec<String> = p.free_vars().into_iter().collect();
    let vars = cfg.vars.clone().unwrap_or(free.clone());
    for v in &vars {
        if !free.contains(v) {
            writeln!(err, "error: {v} is not a free variable of the predicate")?;
            return Ok((3, None));
        }
    }
    let all = match solve_all(&p, &cfg.solver()) {
        Ok(a) => a,
        Err(e) => {
            writeln!(err, "error: {e}")?;
            return Ok((3, None));
        }
    };
    let tuples: BTreeSet<Vec<i64>> = all
        .solutions
        .iter()
        .map(|a| vars.iter().map(|v| a[v]).collect())
        .collect();
    let rendered: Vec<String> = tuples
        .iter()
        .map(|t| {
            if t.len() == 1 {
                t[0].to_string()
            } else {
                format!(
                    "({})",
                    t.iter().map(i64::to_string).collect::<Vec<_>>().join(", ")
                )
            }
        })
        .collect();
    let code = if cfg.json {
        let v = json!({
            "status": if all.complete { "complete" } else { "incomplete" },
            "vars": vars,
            "solutions": tuples.iter().collect::<Vec<_>>(),
            "reason": all.reason,
            "scopes": json_scopes(&all.report),
        });
        writeln!(out, "{v}")?;
        if all.complete { 0 } else { 2 }
    } else if all.complete {
        writeln!(out, "{{{}}}", rendered.join(", "))?;
        write_report(out, &all.report)?;
        0
    } else {
        let reason = all.reason.expect("incomplete result carries a reason");
        writeln!(out, "INCOMPLETE reason={reason}")?;
        if !rendered.is_empty() {
            writeln!(out, "found so far: {{{}}}", rendered.join(", "))?;
        }
        write_report(out, &all.report)?;
        2
    };
    Ok((code, Some(all.report)))
}

/// Disproves (or proves) the sequent `H1, ..., Hn |- G` by searching for a
/// counterexample: a valuation satisfying every hypothesis and the negated
/// goal.
pub fn run_sequent(
    hyps: &[&str],
    goal: &str,
    cfg: &CliConfig,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> io::Result<(i32, Option<EnumReport>)> {
    let g = match parse_or_report(goal, err)? {
        Ok(p) => p,
        Err(code) => return Ok((code, None)),
    };
    let mut counterexample = Pred::Not(Box::new(g));
    for h in hyps.iter().rev() {
        let hp = match parse_or_report(h, err)? {
            Ok(p) => p,
            Err(code) => return Ok((code, None)),
        };
        counterexample = Pred::And(Box::new(hp), Box::new(counterexample));
    }
    let result = match solve(&counterexample, &cfg.solver()) {
        Ok(r) => r,
        Err(e) => {
            writeln!(err, "error: {e}")?;
            return Ok((3, None));
        }
    };
    let report = result.report().clone();
    let code = match &result {
        SolveResult::Sat { witness, .. } => {
            if cfg.json {
                let v = json!({
                    "status": "counterexample",
                    "witness": witness,
                    "scopes": json_scopes(&report),
                });
                writeln!(out, "{v}")?;
            } else {
                writeln!(out, "COUNTEREXAMPLE {}", witness_text(witness))?;
                write_report(out, &report)?;
            }
            0
        }
        SolveResult::Unsat { .. } => {
            if cfg.json {
                let v = json!({"status": "proved", "scopes": json_scopes(&report)});
                writeln!(out, "{v}")?;
            } else {
                writeln!(out, "PROVED")?;
                write_report(out, &report)?;
            }
            1
        }
        SolveResult::Unknown { reason, .. } => {
            if cfg.json {
                let v = json!({
                    "status": "unknown",
                    "reason": reason,
                    "scopes": json_scopes(&report),
                });
                writeln!(out, "{v}")?;
            } else {
                writeln!(out, "UNKNOWN reason={reason}")?;
                write_report(out, &report)?;
            }
            2
        }
    };
    Ok((code, Some(report)))
}

/// Splits sequent-mode input `H1; H2; ... |- G` into hypotheses and goal.
fn split_sequent(text: &str) -> Result<(Vec<&str>, &str), String> {
    let Some((lhs, goal)) = text.split_once("|-") else {
        return Err("sequent input must contain `|-` (e.g. `x in 0..10 |- x >= 0`)".into());
    };
    let hyps: Vec<&str> = lhs
        .split(';')
        .map(str::trim)
        .filter(|h| !h.is_empty())
        .collect();
    Ok((hyps, goal.trim()))
}

/// Dispatches one input line per the configured mode.
pub fn run_line(
    text: &str,
    cfg: &CliConfig,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> io::Result<(i32, Option<EnumReport>)> {
    match cfg.mode {
        Mode::Solve => run_solve(text, cfg, out, err),
        Mode::All => run_all(text, cfg, out, err),
        Mode::Sequent => match split_sequent(text) {
            Ok((hyps, goal)) => run_sequent(&hyps, goal, cfg, out, err),
            Err(e) => {
                writeln!(err, "error: {e}")?;
                Ok((3, None))
            }
        },
    }
}

/// Reads predicates line by line; `:enum` reprints the last enumeration
/// report, `:quit` exits. The exit code is that of the last run.
pub fn run_repl(
    input: &mut dyn BufRead,
    cfg: &CliConfig,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> io::Result<i32> {
    let mut last_report: Option<EnumReport> = None;
    let mut last_code = 0;
    for line in input.lines() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        match text {
            ":quit" | ":q" => break,
            ":enum" => match &last_report {
                Some(r) => write_report(out, r)?,
                None => writeln!(out, "no run yet")?,
            },
            _ => {
                let (code, report) = run_line(text, cfg, out, err)?;
                last_code = code;
                if report.is_some() {
                    last_report = report;
                }
            }
        }
    }
    Ok(last_code)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OnOff {
    On,
    Off,
}

/// Quantified integer constraint solving with sound three-valued verdicts.
#[derive(Debug, Parser)]
#[command(name = "infdom", version)]
pub struct Args {
    /// Predicate text (sequent mode: `H1; H2 |- G`); omit with --file or
    /// for a stdin REPL
    pub input: Option<String>,

    /// Read the input from a file instead of the command line
    #[arg(long)]
    pub file: Option<std::path::PathBuf>,

    #[arg(long, value_enum, default_value = "solve")]
    pub mode: Mode,

    /// Comma-separated projection variables for all-solutions mode
    #[arg(long)]
    pub vars: Option<String>,

    /// Toggle the committed-choice inequality rules
    #[arg(long, value_enum, default_value = "on")]
    pub chr: OnOff,

    /// Enumerate finite domains in keyed random-permutation order
    #[arg(long)]
    pub random_enum: bool,

    /// Permutation seed for --random-enum
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Value trials allowed per quantifier scope
    #[arg(long, default_value_t = 10_000)]
    pub budget: u64,

    /// Secondary wall-clock limit; expiry yields UNKNOWN reason=timeout
    #[arg(long)]
    pub timeout_ms: Option<u64>,

    /// Emit one JSON object instead of text
    #[arg(long)]
    pub json: bool,
}

impl Args {
    pub fn to_config(&self) -> CliConfig {
        CliConfig {
            mode: self.mode,
            strategy: if self.random_enum {
                Strategy::RandomPermutation
            } else {
                Strategy::AlternatingFromZero
            },
            seed: self.seed,
            budget: self.budget.max(1),
            rules: self.chr == OnOff::On,
            json: self.json,
            timeout_ms: self.timeout_ms,
            vars: self.vars.as_ref().map(|s| {
                s.split(',')
                    .map(str::trim)
                    .filter(|v| !v.is_empty())
                    .map(str::to_string)
                    .collect()
            }),
        }
    }
}

/// Entry point shared by the binary and the tests.
pub fn run(args: Args) -> io::Result<i32> {
    let cfg = args.to_config();
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    if let Some(text) = &args.input {
        let (code, _) = run_line(text, &cfg, &mut out, &mut err)?;
        return Ok(code);
    }
    if let Some(path) = &args.file {
        let text = std::fs::read_to_string(path)?;
        let (code, _) = run_line(text.trim(), &cfg, &mut out, &mut err)?;
        return Ok(code);
    }
    let stdin = io::stdin();
    run_repl(&mut stdin.lock(), &cfg, &mut out, &mut err)
}
