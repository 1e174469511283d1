//! `twobath`: run scenario files through the twobath library and write CSV
//! or JSON.

mod commands;
mod config;
mod error;
mod grid;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{EngineKind, KernelSpec, PlaneSpec};
use config::ScenarioConfig;
use error::CliError;
use grid::Axis;

#[derive(Debug, Parser)]
#[command(name = "twobath", version, about = "Two coupled oscillators between two thermal baths")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Scenario file (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Amplitude propagation engine.
    #[arg(long, value_enum, default_value = "exact", global = true)]
    engine: EngineKind,

    /// Output file; overrides the [output] section. Defaults to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Covariance time series over the configured time grid.
    Evolve,
    /// Long-time equilibrium constants and covariance as JSON.
    Equilibrium {
        /// Also propagate to t_end and report the deviation from equilibrium.
        #[arg(long)]
        sweep: bool,
    },
    /// Equilibrium Wigner function on a plane through phase space.
    Wigner {
        /// Swept coordinates, e.g. x1,p1.
        #[arg(long, default_value = "x1,p1")]
        plane: String,
        /// First axis as lo:hi:n.
        #[arg(long, default_value = "-3:3:61", allow_hyphen_values = true)]
        grid_a: String,
        /// Second axis as lo:hi:n.
        #[arg(long, default_value = "-3:3:61", allow_hyphen_values = true)]
        grid_b: String,
        /// Values of the other two coordinates, e.g. x2=0.5,p2=0. Default 0.
        #[arg(long, allow_hyphen_values = true)]
        fixed: Option<String>,
    },
    /// Equilibrium position kernel on a 4-D lattice.
    Kernel {
        /// Axis shared by x1', x2', x1, x2 as lo:hi:n.
        #[arg(long, default_value = "-1:1:5", allow_hyphen_values = true)]
        lattice: String,
        /// Add the numeric inverse Weyl transform of the Wigner function.
        #[arg(long)]
        numeric: bool,
        /// Gauss-Hermite nodes per momentum axis for --numeric.
        #[arg(long, default_value_t = 64)]
        nodes: usize,
    },
    /// Exact and Weisskopf-Wigner propagators side by side.
    CompareWw,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let path = cli.config.ok_or_else(|| CliError::Config("--config is required".into()))?;
    let cfg = ScenarioConfig::load(&path)?;
    let out = cli.out.as_deref();
    match cli.command {
        Command::Evolve => commands::evolve(&cfg, cli.engine, out),
        Command::Equilibrium { sweep } => commands::equilibrium(&cfg, cli.engine, sweep, out),
        Command::Wigner { plane, grid_a, grid_b, fixed } => {
            let axes = grid::plane(&plane)?;
            let spec = PlaneSpec {
                axes,
                grid: (grid_a.parse::<Axis>()?, grid_b.parse::<Axis>()?),
                fixed: grid::fixed(fixed.as_deref(), axes)?,
            };
            commands::wigner(&cfg, &spec, out)
        }
        Command::Kernel { lattice, numeric, nodes } => {
            let spec = KernelSpec { lattice: lattice.parse()?, numeric, nodes };
            commands::kernel(&cfg, &spec, out)
        }
        Command::CompareWw => commands::compare_ww(&cfg, out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.report());
            ExitCode::from(e.code() as u8)
        }
    }
}
