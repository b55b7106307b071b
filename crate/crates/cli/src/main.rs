use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use djcm::scenario::{emit_csv, list_presets, parse_config, preset, run, write_csv, ConfigOverrides, Scenario};
use djcm::Error;

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

/// Double Jaynes-Cummings entanglement simulator.
#[derive(Parser)]
#[command(name = "djcm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a preset or config file and write the entanglement table as CSV.
    Simulate(SimulateArgs),
    /// Print every preset id with its parameters.
    ListPresets,
}

#[derive(Args)]
struct SimulateArgs {
    /// Figure preset, e.g. fig1.
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    preset: Option<String>,
    /// Flat `key = value` scenario file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Fock cutoff per cavity.
    #[arg(long)]
    cutoff: Option<usize>,
    /// Final time gt.
    #[arg(long)]
    tmax: Option<f64>,
    /// Number of time points including both ends.
    #[arg(long)]
    points: Option<usize>,
}

fn load(args: &SimulateArgs) -> Result<Scenario, Error> {
    let mut s = match (&args.preset, &args.config) {
        (Some(id), _) => preset(id)?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            parse_config(&text)?
        }
        (None, None) => return Err(Error::Config("either --preset or --config is required".into())),
    };
    ConfigOverrides {
        cutoff: args.cutoff,
        t_max: args.tmax,
        points: args.points,
    }
    .apply(&mut s)?;
    Ok(s)
}

fn simulate(args: &SimulateArgs) -> Result<(), Error> {
    let scenario = load(args)?;
    let table = run(&scenario)?;
    for w in &table.warnings {
        eprintln!("warning: {w}");
    }
    match &args.out {
        Some(path) => emit_csv(&table, path)?,
        None => write_csv(&table, io::stdout().lock())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(args) => simulate(args),
        Command::ListPresets => {
            let mut out = io::stdout().lock();
            list_presets()
                .into_iter()
                .try_for_each(|(id, desc)| writeln!(out, "{id:<6} {desc}"))
                .map_err(Error::from)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::from(EXIT_NUMERICAL)
            }
        }
    }
}
