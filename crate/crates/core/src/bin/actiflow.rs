use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use actiflow::config::parse_config;
use actiflow::run::{dispatch, RunOptions, Verb};

/// Stability analysis and simulation of active fluids on the periodic box.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the equilibrium named in the config (JSON lines on stdout).
    Classify(Common),
    /// Integrate from a seeded perturbation and write snapshots and energy.csv.
    Simulate(Common),
    #[command(subcommand)]
    Experiment(Experiment),
}

#[derive(Subcommand)]
enum Experiment {
    Decay(Common),
    Growth(Common),
    NormalStability(Common),
    Escape(Common),
    Sweep(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Overrides `outdir` from the config.
    #[arg(long)]
    outdir: Option<PathBuf>,
    /// Overrides `seed` from the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Single-threaded, reproducible run.
    #[arg(long)]
    serial: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (verb, common) = match cli.command {
        Command::Classify(c) => (Verb::Classify, c),
        Command::Simulate(c) => (Verb::Simulate, c),
        Command::Experiment(e) => match e {
            Experiment::Decay(c) => (Verb::Decay, c),
            Experiment::Growth(c) => (Verb::Growth, c),
            Experiment::NormalStability(c) => (Verb::NormalStability, c),
            Experiment::Escape(c) => (Verb::Escape, c),
            Experiment::Sweep(c) => (Verb::Sweep, c),
        },
    };
    let cfg = match parse_config(&common.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", common.config.display());
            return ExitCode::from(2);
        }
    };
    let opts = RunOptions {
        outdir: common.outdir,
        seed: common.seed,
        serial: common.serial,
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match dispatch(verb, &cfg, &opts, &mut lock) {
        Ok(outcome) => {
            let _ = lock.flush();
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            let _ = lock.flush();
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
