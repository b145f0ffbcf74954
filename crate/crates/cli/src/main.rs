//! `qlat`: classify, factorize and enumerate lattice functions, and run the
//! verification suites.
//!
//! Exit codes: 0 on success, 1 when a check or membership test fails, 2 on
//! input errors.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use report::RunReport;

#[derive(Debug, Parser)]
#[command(name = "qlat", version, about = "Lattice polynomial and quasi-polynomial function toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate every predicate on a function file.
    Classify {
        #[arg(short = 'f', long = "file")]
        file: PathBuf,
    },
    /// Factorize a function through a polynomial and a unary map.
    Factorize {
        #[arg(short = 'f', long = "file")]
        file: PathBuf,
        #[arg(long, value_enum, default_value = "canonical")]
        mode: Mode,
        /// Write the factorization file(s) here.
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Run a verification suite over small chain function spaces.
    Verify {
        #[arg(long, value_enum, default_value = "core")]
        suite: SuiteArg,
        #[arg(long, default_value_t = 3)]
        max_elems: usize,
        #[arg(long, default_value_t = 3)]
        max_arity: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Seeded samples of boolean(2)^2 -> boolean(2) in the core suite.
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
    },
    /// Enumerate a class of functions.
    Enumerate {
        #[arg(long)]
        arity: usize,
        /// Lattice: inline JSON, `chain:K`, `boolean:K`, or a file path.
        #[arg(long)]
        domain: String,
        #[arg(long)]
        codomain: String,
        #[arg(long, value_enum)]
        class: Class,
        #[arg(long)]
        count_only: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Canonical,
    Sugeno,
    Transformed,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Core,
    Chains,
    Transformed,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Class {
    Polynomial,
    Sugeno,
    Quasi,
    Transformed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let start = std::time::Instant::now();
    let outcome = match &cli.command {
        Command::Classify { file } => commands::classify(file),
        Command::Factorize { file, mode, output } => commands::factorize(file, *mode, output.as_deref()),
        Command::Verify {
            suite,
            max_elems,
            max_arity,
            seed,
            samples,
        } => commands::verify(*suite, *max_elems, *max_arity, *seed, *samples),
        Command::Enumerate {
            arity,
            domain,
            codomain,
            class,
            count_only,
        } => commands::enumerate(*arity, domain, codomain, *class, *count_only),
    };
    let report = match outcome {
        Ok(out) => RunReport {
            command: argv,
            inputs: out.inputs,
            result: out.result,
            exit_status: if out.ok { 0 } else { 1 },
        },
        Err(e) => {
            let msg = format!("{e:#}");
            eprintln!("error: {msg}");
            RunReport {
                command: argv,
                inputs: Vec::new(),
                result: serde_json::json!({ "error": msg }),
                exit_status: 2,
            }
        }
    };
    println!("{}", report.to_pretty());
    eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    ExitCode::from(report.exit_status as u8)
}
