//! Scenario-driven command line for spreading-set prediction, PDE
//! simulation, and verification.

mod commands;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "bifront",
    version,
    about = "Predict and verify directional spreading of competing fronts"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute speed profiles, refined speeds, and condition reports.
    Predict(CommonArgs),
    /// Measure the planar invasion speed and print it as one CSV line.
    FrontSpeed(CommonArgs),
    /// Run the reaction-diffusion system and write snapshots.
    Simulate(CommonArgs),
    /// Predict, simulate (or reuse snapshots), and compare speeds.
    Verify(CommonArgs),
    /// Write the canonical scenario file and print its hash.
    Export(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Scenario file (TOML).
    #[arg(long)]
    scenario: PathBuf,
    /// Output directory; defaults to $BIFRONT_OUT, then ./out.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for grid sweeps; defaults to all cores.
    #[arg(long)]
    threads: Option<usize>,
    /// Accepted for interface stability; the pipeline is deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

/// Exit classes: 2 rejected input, 3 numerical failure, 4 violated
/// hypotheses with outputs still written.
pub enum Failure {
    Validation(bifront::Error),
    Numerical(bifront::Error),
}

impl Failure {
    fn report(&self) -> u8 {
        let (class, err) = match self {
            Failure::Validation(e) => ("validation", e),
            Failure::Numerical(e) => ("numerical", e),
        };
        if let bifront::Error::Invalid(issues) = err {
            for issue in issues {
                eprintln!("error: {class}: {}: {}", issue.path, issue.message);
            }
        } else {
            eprintln!("error: {class}: {err}");
        }
        match self {
            Failure::Validation(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args = match &cli.cmd {
        Cmd::Predict(a)
        | Cmd::FrontSpeed(a)
        | Cmd::Simulate(a)
        | Cmd::Verify(a)
        | Cmd::Export(a) => a,
    };
    if let Some(n) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: validation: --threads: {e}");
            return ExitCode::from(2);
        }
    }
    if args.seed.is_some() {
        eprintln!("note: --seed accepted; all stages are deterministic");
    }
    let result = match &cli.cmd {
        Cmd::Predict(a) => commands::predict(a),
        Cmd::FrontSpeed(a) => commands::front_speed(a),
        Cmd::Simulate(a) => commands::simulate(a),
        Cmd::Verify(a) => commands::verify(a),
        Cmd::Export(a) => commands::export(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(failure) => ExitCode::from(failure.report()),
    }
}
