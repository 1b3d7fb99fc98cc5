//! Command-line front end: instance parsing, trace/proof files, instance
//! generators and the benchmark harness.
//!
//! Exit codes follow solver conventions: 10 SAT, 20 UNSAT, 0 for an accepted
//! check or other success, 1 for rejected/unknown, 2 for usage and I/O
//! errors.

pub mod bench;
pub mod gen;
pub mod instance;
pub mod proof_file;
pub mod syntax;
pub mod trace_file;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

use mcres_core::engine::{solve, Outcome, SolveOptions};
use mcres_core::resstar::{check, System};
use mcres_core::theory::{FeasibilityMode, LraTheory};
use mcres_core::translate::{mcsat_to_res, res_to_mcsat, StepAccount};

pub const EXIT_SAT: u8 = 10;
pub const EXIT_UNSAT: u8 = 20;
pub const EXIT_OK: u8 = 0;
pub const EXIT_REJECTED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "mcres",
    about = "Model-constructing SAT over linear rational arithmetic, with resolution proof checking and trace/proof translation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Complete,
    Univariate,
}

impl From<ModeArg> for FeasibilityMode {
    fn from(mode: ModeArg) -> Self {
        match mode {
            ModeArg::Complete => FeasibilityMode::Complete,
            ModeArg::Univariate => FeasibilityMode::UnivariateOnly,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SystemArg {
    ResT,
    ResStarT,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Pigeonhole,
    Chain,
    LraDiamond,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance; prints SAT/UNSAT/UNKNOWN and optionally writes the
    /// trace.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "complete")]
        mode: ModeArg,
        #[arg(long, default_value_t = 500_000)]
        max_steps: usize,
        /// Write the rule-application trace to this path.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Forget older learned clauses at scheduled restarts.
        #[arg(long)]
        forget: bool,
    },
    /// Translate between proofs and traces.
    Translate {
        #[command(subcommand)]
        direction: Direction,
    },
    /// Check a proof against an instance.
    Check {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        proof: PathBuf,
        #[arg(long, value_enum, default_value = "res-star-t")]
        system: SystemArg,
    },
    /// Generate a benchmark instance.
    Gen {
        #[arg(value_enum)]
        family: FamilyArg,
        n: usize,
        /// Nonzero seeds shuffle clause order deterministically.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the families and random instances through the solve/translate/
    /// check pipeline and report step accounts.
    Bench {
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "complete")]
        mode: ModeArg,
        /// Number of random CNF instances to include.
        #[arg(long, default_value_t = 25)]
        random: usize,
        #[arg(long, default_value_t = 500_000)]
        max_steps: usize,
    },
}

#[derive(Subcommand)]
enum Direction {
    /// Simulate a proof as a machine trace.
    ResToMcsat {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        proof: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Harvest a proof from a trace.
    McsatToRes {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_file(path: &Path, content: &str) -> anyhow::Result<()> {
    fs::write(path, content).with_context(|| format!("writing {}", path.display()))
}

fn print_account(label: &str, account: &StepAccount) {
    println!(
        "{label}: total={} theory={} non-theory={}",
        account.total, account.theory_rules, account.non_theory_rules
    );
}

fn cmd_solve(
    instance: &Path,
    mode: ModeArg,
    max_steps: usize,
    trace_out: Option<&Path>,
    forget: bool,
) -> anyhow::Result<u8> {
    let (_, clauses) = instance::parse_instance(&read(instance)?)?;
    let options = SolveOptions {
        max_steps,
        forget_on_restart: forget,
    };
    let (outcome, trace) = solve(clauses, LraTheory::new(mode.into()), &options);
    if let Some(path) = trace_out {
        write_file(path, &trace_file::write_trace(&trace))?;
    }
    print_account("steps", &StepAccount::of_trace(&trace));
    match outcome {
        Outcome::Sat(model) => {
            println!("SAT");
            for (atom, value) in &model.bools {
                println!("  {atom} = {value}");
            }
            for (var, value) in model.assignment.iter() {
                println!("  {var} = {value}");
            }
            Ok(EXIT_SAT)
        }
        Outcome::Unsat => {
            println!("UNSAT");
            Ok(EXIT_UNSAT)
        }
        Outcome::StepLimit => {
            println!("UNKNOWN (step limit)");
            Ok(EXIT_REJECTED)
        }
    }
}

fn cmd_translate(direction: &Direction) -> anyhow::Result<u8> {
    match direction {
        Direction::ResToMcsat {
            instance,
            proof,
            out,
        } => {
            let (vocab, clauses) = instance::parse_instance(&read(instance)?)?;
            let proof = proof_file::parse_proof(&read(proof)?, &vocab)?;
            match res_to_mcsat(&proof, &clauses) {
                Ok((trace, trace_account)) => {
                    write_file(out, &trace_file::write_trace(&trace))?;
                    print_account("proof", &StepAccount::of_proof(&proof));
                    print_account("trace", &trace_account);
                    Ok(EXIT_OK)
                }
                Err(e) => {
                    eprintln!("translation failed: {e}");
                    Ok(EXIT_REJECTED)
                }
            }
        }
        Direction::McsatToRes {
            instance,
            trace,
            out,
        } => {
            let (vocab, clauses) = instance::parse_instance(&read(instance)?)?;
            let trace = trace_file::parse_trace(&read(trace)?, &vocab)?;
            match mcsat_to_res(&trace, &clauses) {
                Ok((proof, proof_account)) => {
                    write_file(out, &proof_file::write_proof(&proof))?;
                    print_account("trace", &StepAccount::of_trace(&trace));
                    print_account("proof", &proof_account);
                    Ok(EXIT_OK)
                }
                Err(e) => {
                    eprintln!("translation failed: {e}");
                    Ok(EXIT_REJECTED)
                }
            }
        }
    }
}

fn cmd_check(instance: &Path, proof: &Path, system: SystemArg) -> anyhow::Result<u8> {
    let (vocab, clauses) = instance::parse_instance(&read(instance)?)?;
    let proof = proof_file::parse_proof(&read(proof)?, &vocab)?;
    let system = match system {
        SystemArg::ResT => System::ResT,
        SystemArg::ResStarT => System::ResStarT,
    };
    match check(&proof, &clauses, system) {
        Ok(()) => {
            let kind = if proof.is_refutation() {
                "refutation"
            } else {
                "derivation"
            };
            println!("accepted ({kind})");
            Ok(EXIT_OK)
        }
        Err(e) => {
            println!("rejected: {e}");
            Ok(EXIT_REJECTED)
        }
    }
}

fn cmd_gen(family: FamilyArg, n: usize, seed: u64, out: Option<&Path>) -> anyhow::Result<u8> {
    let family = match family {
        FamilyArg::Pigeonhole => gen::Family::Pigeonhole,
        FamilyArg::Chain => gen::Family::Chain,
        FamilyArg::LraDiamond => gen::Family::LraDiamond,
    };
    let (vocab, clauses) = gen::generate(family, n, seed)?;
    let text = instance::write_instance(&vocab, &clauses);
    match out {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    Ok(EXIT_OK)
}

fn dispatch(cli: Cli) -> anyhow::Result<u8> {
    match &cli.command {
        Command::Solve {
            instance,
            mode,
            max_steps,
            trace,
            forget,
        } => cmd_solve(instance, *mode, *max_steps, trace.as_deref(), *forget),
        Command::Translate { direction } => cmd_translate(direction),
        Command::Check {
            instance,
            proof,
            system,
        } => cmd_check(instance, proof, *system),
        Command::Gen {
            family,
            n,
            seed,
            out,
        } => cmd_gen(*family, *n, *seed, out.as_deref()),
        Command::Bench {
            max_n,
            seed,
            mode,
            random,
            max_steps,
        } => {
            let config = bench::BenchConfig {
                max_n: *max_n,
                seed: *seed,
                mode: (*mode).into(),
                random: *random,
                max_steps: *max_steps,
            };
            Ok(if bench::run_bench(&config) {
                EXIT_OK
            } else {
                EXIT_REJECTED
            })
        }
    }
}

pub fn run() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
