mod commands;
mod problem;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use dsalg::Error;

use crate::problem::Problem;
use crate::report::Report;

const COMMANDS: [&str; 14] = [
    "hypotheses",
    "logder",
    "theta",
    "liouville",
    "gr-check",
    "bs-ideal",
    "bs-poly",
    "witness",
    "hyperplane",
    "nabla",
    "regularity",
    "spencer",
    "arrangement",
    "appendix-check",
];

/// Annihilators, Liouville ideals and Bernstein-Sato ideals of factorized
/// polynomials over Q.
#[derive(Parser, Debug)]
#[command(name = "dsalg", version)]
pub struct Args {
    #[arg(value_parser = COMMANDS)]
    pub command: String,
    /// Problem file (JSON).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Emit JSON instead of `key = value` lines.
    #[arg(long)]
    pub json: bool,
    /// Elimination order: elim, elim-lex or elim-weighted.
    #[arg(long)]
    pub order: Option<String>,
    /// Comma-separated rationals, e.g. `1,-2/3`.
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
    /// Polynomial in the parameters, e.g. `s1+s2+2`.
    #[arg(long, allow_hyphen_values = true)]
    pub form: Option<String>,
    #[arg(long)]
    pub max_degree: Option<u32>,
    #[arg(long)]
    pub max_basis: Option<usize>,
    /// Treat the annihilator as generated by derivations without proof.
    #[arg(long)]
    pub assume_hypotheses: bool,
    /// Seed for `appendix-check`.
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Number of random cases for `appendix-check`.
    #[arg(long, default_value_t = 24)]
    pub count: usize,
}

fn exit_code_for(e: &anyhow::Error) -> u8 {
    match e.chain().find_map(|c| c.downcast_ref::<Error>()) {
        Some(Error::ResourceLimit(_)) => 3,
        Some(Error::NotFree | Error::NotKoszulFree | Error::StructureConstantFailure) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();
    let problem = match args.input.as_deref().map(|p| problem::load(p).and_then(Problem::new)) {
        None => None,
        Some(Ok(p)) => Some(p),
        Some(Err(e)) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let outcome = match commands::run(&args.command, &args, problem.as_ref()) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(exit_code_for(&e));
        }
    };
    let report = Report {
        command: args.command.clone(),
        input: problem.map(|p| p.file),
        hypotheses: outcome
            .hypotheses
            .map(|h| serde_json::to_value(h).expect("hypotheses serialize")),
        result: outcome.result,
        caveats: outcome.caveats,
        timing_ms: (start.elapsed().as_secs_f64() * 1e6).round() / 1e3,
    };
    for c in &report.caveats {
        eprintln!("warning: {c}");
    }
    if args.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    ExitCode::from(if outcome.hypothesis_failure { 2 } else { 0 })
}
