//! `strata`: batch front end over theory files.
//!
//! Exit codes: 0 success, 1 `stk` or sequent mismatch, 2 fuel exhaustion or
//! proof inference error, 3 usage and parse errors.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use strata_core::ars::{all_steps, extension, innermost, normal_forms_under, rightmost_innermost, Memoryless};
use strata_core::proof::{infer, parse_proof};
use strata_core::strategy::{eval, parse_strategy, EvalResult};
use strata_core::term::{parse_term, Term};
use strata_core::theory::{parse_theory, Theory};
use strata_core::Error;

#[derive(Debug, Parser)]
#[command(name = "strata", version, about = "Strategic term rewriting on theory files")]
struct Cli {
    /// Theory file with `sig`, `rule` and `strat` lines.
    #[arg(long, global = true)]
    file: Option<PathBuf>,

    /// Evaluation budget.
    #[arg(long, global = true, default_value_t = 10_000)]
    fuel: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Apply a strategy expression (or a named strategy) to a term.
    Eval {
        #[arg(long)]
        strategy: String,
        #[arg(long)]
        term: String,
    },
    /// Print the normal forms reachable under an intensional strategy.
    Normalize {
        #[arg(long)]
        term: String,
        #[arg(long, value_enum, default_value_t = Intensional::RightmostInnermost)]
        intensional: Intensional,
    },
    /// Print every derivation of bounded length generated by a strategy.
    Derive {
        #[arg(long)]
        term: String,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Intensional::All)]
        intensional: Intensional,
        #[arg(long)]
        json: bool,
    },
    /// Infer the sequent proved by a proof term.
    CheckProof {
        #[arg(long)]
        proof: String,
        #[arg(long)]
        from: Option<String>,
        #[arg(long)]
        to: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Intensional {
    Innermost,
    RightmostInnermost,
    All,
}

/// A failed command: what to print on stderr and the exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
}

type Outcome = Result<(String, u8), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(3),
            };
        }
    };
    let (out, code) = match run(&cli) {
        Ok(done) => done,
        Err(f) => {
            eprintln!("error: {}", f.message);
            return ExitCode::from(f.code);
        }
    };
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.as_bytes());
    let _ = stdout.flush();
    ExitCode::from(code)
}

fn run(cli: &Cli) -> Outcome {
    let path = cli
        .file
        .as_ref()
        .ok_or_else(|| Failure::usage("the `--file <path>` option is required"))?;
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let th = parse_theory(&text).map_err(|e| Failure::usage(format!("{}:{e}", path.display())))?;
    match &cli.command {
        Command::Eval { strategy, term } => cmd_eval(&th, strategy, term, cli.fuel),
        Command::Normalize { term, intensional } => cmd_normalize(&th, term, *intensional, cli.fuel),
        Command::Derive {
            term,
            depth,
            intensional,
            json,
        } => cmd_derive(&th, term, *depth, *intensional, *json),
        Command::CheckProof { proof, from, to } => cmd_check_proof(&th, proof, from.as_deref(), to.as_deref()),
    }
}

fn term_arg(th: &Theory, flag: &str, text: &str) -> Result<Term, Failure> {
    parse_term(text, &th.signature).map_err(|e| Failure::usage(format!("--{flag}: {e}")))
}

fn intensional(th: &Theory, z: Intensional) -> Memoryless {
    let rs = th.rules.clone();
    match z {
        Intensional::Innermost => innermost(rs),
        Intensional::RightmostInnermost => rightmost_innermost(rs),
        Intensional::All => all_steps(rs),
    }
}

fn fuel_exhausted() -> Failure {
    Failure {
        code: 2,
        message: "fuel exhausted".into(),
    }
}

fn cmd_eval(th: &Theory, strategy: &str, term: &str, fuel: usize) -> Outcome {
    let s = parse_strategy(strategy, &th.signature, &th.strategies)
        .map_err(|e| Failure::usage(format!("--strategy: {e}")))?;
    let t = term_arg(th, "term", term)?;
    match eval(&s, &t, &th.rules, fuel) {
        Ok(r @ EvalResult::Value(_)) => Ok((format!("{r}\n"), 0)),
        Ok(r @ EvalResult::Stk) => Ok((format!("{r}\n"), 1)),
        Err(Error::FuelExhausted) => Err(fuel_exhausted()),
        Err(e) => Err(Failure::usage(e.to_string())),
    }
}

fn cmd_normalize(th: &Theory, term: &str, z: Intensional, fuel: usize) -> Outcome {
    let t = term_arg(th, "term", term)?;
    let nfs = match normal_forms_under(&intensional(th, z), &t, fuel) {
        Ok(nfs) => nfs,
        Err(Error::FuelExhausted) => return Err(fuel_exhausted()),
        Err(e) => return Err(Failure::usage(e.to_string())),
    };
    let mut lines: Vec<String> = nfs.iter().map(Term::to_string).collect();
    lines.sort();
    Ok((lines.iter().map(|l| format!("{l}\n")).collect(), 0))
}

fn cmd_derive(th: &Theory, term: &str, depth: usize, z: Intensional, json: bool) -> Outcome {
    let t = term_arg(th, "term", term)?;
    let mut ds: Vec<_> = extension(&intensional(th, z), &t, depth)
        .into_iter()
        .map(|d| (d.to_text(), d))
        .collect();
    ds.sort_by(|a, b| a.0.cmp(&b.0));
    if json {
        // one derivation per line, still a single JSON array
        let rows: Vec<String> = ds.iter().map(|(_, d)| d.to_json().to_string()).collect();
        Ok((format!("[\n{}\n]\n", rows.join(",\n")), 0))
    } else {
        Ok((ds.iter().map(|(l, _)| format!("{l}\n")).collect(), 0))
    }
}

fn cmd_check_proof(th: &Theory, proof: &str, from: Option<&str>, to: Option<&str>) -> Outcome {
    let pi = parse_proof(proof, &th.signature, &th.rules).map_err(|e| Failure::usage(format!("--proof: {e}")))?;
    let from = from.map(|f| term_arg(th, "from", f)).transpose()?;
    let to = to.map(|t| term_arg(th, "to", t)).transpose()?;
    let seq = infer(&pi, &th.rules).map_err(|e| Failure {
        code: 2,
        message: e.to_string(),
    })?;
    let matches = from.is_none_or(|f| f == seq.source) && to.is_none_or(|t| t == seq.target);
    Ok((format!("{seq}\n"), if matches { 0 } else { 1 }))
}
