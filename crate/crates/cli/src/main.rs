//! `evoverse`: run procedures on the static and evolutionary backends,
//! replay the automaton examples, flood, refute, realize traces, check
//! certificates, manage snapshots and serve the game API.
//!
//! Results are JSON lines on stdout. Domain errors print a JSON object
//! `{"error": {"code", "message"}}` on stderr and exit with status 1; usage
//! errors exit with status 2.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "evoverse",
    version,
    about = "Static and evolutionary universe-computer simulators"
)]
struct Cli {
    /// Seed for every random choice (default 0; `serve` also reads EVOVERSE_SEED).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Step budget for procedure runs.
    #[arg(long, global = true)]
    budget: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    #[value(alias = "v")]
    Static,
    #[value(alias = "e")]
    Evolutionary,
}

#[derive(Debug, Args)]
struct StateArgs {
    /// Evolutionary state to start from.
    #[arg(long)]
    state: Option<PathBuf>,
    /// Where to write the evolutionary state afterwards.
    #[arg(long)]
    save_state: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a procedure on each input.
    Run {
        #[arg(long, value_enum, default_value = "evolutionary")]
        backend: BackendArg,
        /// `scan`, `empty`, `all`, or a JSON file (instruction list or machine description).
        #[arg(long, default_value = "scan")]
        procedure: String,
        /// Comma-separated inputs; an empty item is the empty string.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        inputs: Vec<String>,
        /// Include the rendered configurations of each path.
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        state: StateArgs,
    },
    /// Query the evolving automaton directly.
    Pt1 {
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        inputs: Vec<String>,
        /// Print the automaton snapshot after the queries.
        #[arg(long)]
        snapshot: bool,
    },
    /// Present the scanning procedure with every string of length n + 1.
    Flood {
        #[arg(long)]
        n: usize,
        /// Largest n accepted.
        #[arg(long, default_value_t = 10)]
        bound: usize,
        /// Inputs queried on the flooded instance afterwards.
        #[arg(long, value_delimiter = ',')]
        then: Vec<String>,
        /// Inputs queried on a branch taken before the flood.
        #[arg(long, value_delimiter = ',')]
        fresh_then: Vec<String>,
        #[command(flatten)]
        state: StateArgs,
    },
    /// Run the scanning procedure over two orderings of one input set.
    OrderExp {
        #[arg(long, value_enum, default_value = "evolutionary")]
        backend: BackendArg,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        first: Vec<String>,
        /// Defaults to a seeded shuffle of `--first`.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        second: Option<Vec<String>>,
        /// Run the two branches on separate threads when above 1.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Build a certificate that a decider is not a fast decider.
    Refute {
        /// `all`, `none`, `scan`, or a JSON file.
        #[arg(long)]
        decider: String,
        /// Polynomial step budget, e.g. `n^2`.
        #[arg(long = "f", default_value = "n^2")]
        f: String,
        /// Declared threshold t (f(n) < 2^n for n > t).
        #[arg(long)]
        threshold: Option<u64>,
        /// Validity bound k.
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long)]
        challenge: Option<String>,
        /// Certificate output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        state: StateArgs,
    },
    /// Build a static and an evolutionary machine reproducing a trace.
    Realize {
        /// JSONL file of `{"input", "output"}` objects.
        #[arg(long, conflicts_with = "pairs")]
        trace: Option<PathBuf>,
        /// Comma-separated `input=output` pairs.
        #[arg(long, value_delimiter = ',')]
        pairs: Vec<String>,
    },
    /// Re-check a certificate from scratch.
    ReplayCert { file: PathBuf },
    /// Serve the session API.
    Serve {
        #[arg(long, env = "EVOVERSE_PORT", default_value_t = evoverse_server::DEFAULT_PORT)]
        port: u16,
    },
    /// Query the scanning procedure on the evolutionary backend and dump
    /// or inspect its state.
    Snapshot {
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        inputs: Vec<String>,
        /// Also print the query log as JSONL.
        #[arg(long)]
        log: bool,
        #[command(flatten)]
        state: StateArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(1)
        }
    }
}
