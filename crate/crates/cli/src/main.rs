//! Experiment runner for determinization search over belief mixtures.
//!
//! Each subcommand resolves one flat configuration (CLI flags over config
//! file over defaults), runs the experiment, and writes a CSV (or policy
//! file) plus a `.meta` sidecar echoing the configuration and the content
//! hashes of every policy file involved.

mod config;
mod run;

use clap::{Parser, Subcommand};

use config::{Config, RunArgs};
use run::CommandKind;

#[derive(Parser)]
#[command(
    name = "detmix",
    version,
    about = "Determinization search experiments over private/public belief mixtures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep lambda and measure information leakage (true-state sampling ratio).
    Tssr(RunArgs),
    /// Sweep lambda and measure exact best-response utility.
    Exploit(RunArgs),
    /// Sweep (first-decision, later-decision) lambda schedules against a best responder.
    Heatmap(RunArgs),
    /// Sweep lambda and play head-to-head matches against a fixed opponent.
    Match(RunArgs),
    /// Stabilize one seat's policy and write it to a file.
    Policy(RunArgs),
}

impl Command {
    fn split(&self) -> (CommandKind, &RunArgs) {
        match self {
            Command::Tssr(args) => (CommandKind::Tssr, args),
            Command::Exploit(args) => (CommandKind::Exploit, args),
            Command::Heatmap(args) => (CommandKind::Heatmap, args),
            Command::Match(args) => (CommandKind::Match, args),
            Command::Policy(args) => (CommandKind::Policy, args),
        }
    }
}

const EXIT_INVALID_CONFIG: i32 = 2;
const EXIT_NON_CONVERGENCE: i32 = 3;

fn exit_code_for(error: &detmix_core::Error) -> i32 {
    use detmix_core::Error;
    match error {
        Error::NonConvergence { .. } => EXIT_NON_CONVERGENCE,
        Error::InvalidConfig { .. } | Error::InvalidLambda { .. } => EXIT_INVALID_CONFIG,
        _ => 1,
    }
}

fn real_main() -> i32 {
    let cli = Cli::parse();
    let (kind, args) = cli.command.split();
    let config = match Config::resolve(args) {
        Ok(config) => config,
        Err(error) => {
            eprintln!("error: {error}");
            return EXIT_INVALID_CONFIG;
        }
    };
    if let Some(workers) = config.workers {
        if let Err(error) = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
        {
            eprintln!("error: cannot configure {workers} workers: {error}");
            return 1;
        }
    }
    match run::run(kind, &config) {
        Ok(output) => {
            println!("{}", output.csv_path.display());
            0
        }
        Err(error) => {
            eprintln!("error: {error}");
            exit_code_for(&error)
        }
    }
}

fn main() {
    std::process::exit(real_main());
}
