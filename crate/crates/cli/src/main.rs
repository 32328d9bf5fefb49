//! `quditcc` command-line front end.
//!
//! Exit codes: 0 success, 1 verification failed, 2 usage or input error,
//! 3 simulation budget exceeded.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "quditcc", version, about = "Compile qubit circuits onto trapped-ion qudits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    Qutrit,
    Ququart,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Pairing {
    Sequential,
    Greedy,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compile a qubit circuit to a qudit circuit and print its gate counts.
    Compile {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "qutrit")]
        backend: Backend,
        #[arg(long, value_enum, default_value = "greedy")]
        pairing: Pairing,
        /// Transition graph file; rewrites the output onto its edges.
        #[arg(long)]
        physical_graph: Option<PathBuf>,
        /// Write the compiled circuit here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Check a compiled qudit circuit against its qubit source.
    Verify {
        source: PathBuf,
        compiled: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        json: bool,
        #[arg(long, short)]
        verbose: bool,
    },
    /// Run a circuit on one basis input and list the output state.
    Simulate {
        /// Qudit program, or qubit circuit compiled with `--backend` first.
        input: PathBuf,
        /// Qubit bits (one per qubit) or qudit levels (one per qudit,
        /// comma-separated when `d > 10`).
        basis: String,
        #[arg(long, value_enum, default_value = "qutrit")]
        backend: Backend,
        #[arg(long, value_enum, default_value = "greedy")]
        pairing: Pairing,
        #[arg(long)]
        physical_graph: Option<PathBuf>,
        /// Amplitudes at or below this magnitude are omitted.
        #[arg(long, default_value_t = 1e-9)]
        threshold: f64,
        /// Sample this many shots from the outcome distribution.
        #[arg(long)]
        shots: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Tabulate ladder two-qutrit counts against the qubit baselines.
    Report {
        #[arg(long, default_value_t = 2)]
        from: usize,
        #[arg(long, default_value_t = 10)]
        to: usize,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compile { input, backend, pairing, physical_graph, out, json } => {
            commands::compile(&input, backend, pairing, physical_graph.as_deref(), out.as_deref(), json)
        }
        Command::Verify { source, compiled, tol, json, verbose } => {
            commands::verify(&source, &compiled, tol, json, verbose)
        }
        Command::Simulate { input, basis, backend, pairing, physical_graph, threshold, shots, seed, json } => {
            let opts = commands::SimulateOptions { threshold, shots, seed, json };
            commands::simulate(&input, &basis, backend, pairing, physical_graph.as_deref(), &opts)
        }
        Command::Report { from, to, json } => commands::report(from, to, json),
    };
    match result {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
