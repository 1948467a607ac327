//! `rackconf`: solve, replay, verify and benchmark rack configurations, or
//! serve the interactive session API.
//!
//! Exit codes: 0 on success or when a solution is found, 1 when there is no
//! solution or a counterexample was found, 2 on usage or I/O errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "rackconf", version, about = "Rack configuration by incremental constraint repair")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve a configuration file and print the final configuration
    Solve(SolveArgs),
    /// Re-apply the actions of a trace file and print the final configuration
    Replay {
        /// Trace written by `solve --emit-trace`
        trace: PathBuf,
    },
    /// Check a property of the algorithmic strategy on every input in a scope
    Verify(VerifyArgs),
    /// Explore every UI action sequence in a scope for hard-constraint breaches
    UiCheck {
        /// Length of the explored action sequences
        #[arg(long, default_value_t = 4)]
        max_steps: u32,
    },
    /// Run approaches on the generated benchmark instances
    Bench(BenchArgs),
    /// Print a generated benchmark instance
    Generate {
        /// Instance index, 1 to 20
        #[arg(long)]
        instance: u32,
    },
    /// Serve the HTTP session API
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        bind: std::net::SocketAddr,
        /// Idle seconds before a session is dropped
        #[arg(long, default_value_t = 1800)]
        session_ttl: u64,
    },
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Configuration file in the fact format
    input: PathBuf,
    /// generic, ordered, algorithmic or ui
    #[arg(long, default_value = "algorithmic")]
    strategy: String,
    #[arg(long, default_value_t = 500)]
    max_steps: u32,
    /// Maximum number of search nodes
    #[arg(long)]
    node_budget: Option<u64>,
    /// Wall-clock limit in seconds
    #[arg(long, env = "RACKCONF_TIMEOUT")]
    timeout: Option<f64>,
    /// Skip states already explored with a larger step budget
    #[arg(long)]
    visited_pruning: bool,
    /// Write the solving trace to this file
    #[arg(long)]
    emit_trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// same-frame or valid
    #[arg(long, default_value = "same-frame")]
    property: String,
    /// Largest count of each element type in an input
    #[arg(long)]
    scope: u32,
    #[arg(long, default_value_t = 500)]
    max_steps: u32,
    /// Where to write the counterexample trace
    #[arg(long, default_value = "counterexample.trace")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Comma-separated approaches: strategy names or baseline
    #[arg(long, default_value = "algorithmic,ordered")]
    strategies: String,
    /// Instance range like 1..20, 1..=5, 3 or 1,4,7
    #[arg(long, default_value = "1..20")]
    instances: String,
    /// Per-run limit in seconds
    #[arg(long, env = "RACKCONF_TIMEOUT", default_value_t = 600.0)]
    timeout: f64,
    /// CSV output file; standard output when absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
