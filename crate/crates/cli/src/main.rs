use std::path::PathBuf;
use std::process::ExitCode;

use casimir_cli::{run, CliError, Command, Overrides, RunConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "casimir",
    version,
    about = "Casimir forces and torques between planar plates"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Tabulate ε(iξ) of the configured material
    EpsTable(Common),
    /// Tangential force per width over a separation grid
    ForceSweep(Common),
    /// Torque between crossed plates over an angle grid
    TorqueSweep(Common),
    /// Partial Matsubara sums at checkpoints
    Convergence(Common),
    /// Check optical data files referenced by the config
    ValidateData(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum ZeroModeArg {
    Drude,
    Plasma,
    Model,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Write output here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    zero_mode: Option<ZeroModeArg>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    temperature_k: Option<f64>,
}

fn execute(cmd: Command, args: &Common) -> Result<i32, CliError> {
    let mut cfg = RunConfig::load(&args.config)?;
    Overrides {
        zero_mode: args.zero_mode.map(|z| {
            match z {
                ZeroModeArg::Drude => "drude",
                ZeroModeArg::Plasma => "plasma",
                ZeroModeArg::Model => "model",
            }
            .to_string()
        }),
        n_max: args.n_max,
        temperature_k: args.temperature_k,
    }
    .apply(&mut cfg)?;

    let outcome = run(cmd, &cfg)?;
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    match &args.out {
        Some(path) => std::fs::write(path, &outcome.text)?,
        None => print!("{}", outcome.text),
    }
    Ok(outcome.status.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, args) = match &cli.command {
        Cmd::EpsTable(a) => (Command::EpsTable, a),
        Cmd::ForceSweep(a) => (Command::ForceSweep, a),
        Cmd::TorqueSweep(a) => (Command::TorqueSweep, a),
        Cmd::Convergence(a) => (Command::Convergence, a),
        Cmd::ValidateData(a) => (Command::ValidateData, a),
    };
    match execute(cmd, args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
