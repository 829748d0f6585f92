//! `fermient`: threshold tables, q-sweeps and state analysis from the command line.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{error::ErrorKind, Args, Parser, Subcommand};

use commands::CliError;

#[derive(Debug, Parser)]
#[command(name = "fermient", version, about = "Entanglement indicators for identical fermions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Entropic-order grid and scan resolution shared by several subcommands.
#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// First entropic order of the sweep.
    #[arg(long, default_value_t = 1.0)]
    pub q_start: f64,
    /// Last finite entropic order of the sweep.
    #[arg(long, default_value_t = 50.0)]
    pub q_stop: f64,
    /// Number of finite orders, equally spaced.
    #[arg(long, default_value_t = 99)]
    pub q_count: usize,
    /// Append q = inf as the final order.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub include_inf: bool,
    /// Coarse grid step on [0, 1] before bisection.
    #[arg(long, default_value_t = 1e-3)]
    pub grid_step: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// p_min of every indicator for one family, as CSV.
    Table {
        /// werner, gisin, theta, dim6-1, dim6-2 or dim6-3.
        family: String,
        #[arg(long, default_value_t = 1e-3)]
        grid_step: f64,
        /// Number of angles for the theta family.
        #[arg(long, default_value_t = 51)]
        theta_points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Wide q-sweep CSV: figure 1 (werner, gisin) or figure 2 (dim6 families).
    Figure {
        which: u8,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// `q,p_min` CSV for one mixed family.
    Sweep {
        family: String,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Every indicator of a density matrix read from JSON.
    Analyze {
        input: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form and numeric thresholds of the N-fermion Werner family.
    Nfermion {
        #[arg(long = "N")]
        particles: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1e-3)]
        grid_step: f64,
    },
    /// Checks that random separable states are never detected.
    Selftest {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        /// Single-particle dimension (even).
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[command(flatten)]
        grid: GridArgs,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Table {
            family,
            grid_step,
            theta_points,
            out,
        } => commands::emit(&commands::table(&family, grid_step, theta_points)?, out.as_deref()),
        Command::Figure { which, grid, out } => commands::emit(&commands::figure(which, &grid)?, out.as_deref()),
        Command::Sweep { family, grid, out } => commands::emit(&commands::sweep(&family, &grid)?, out.as_deref()),
        Command::Analyze { input, grid, out } => commands::emit(&commands::analyze(&input, &grid)?, out.as_deref()),
        Command::Nfermion {
            particles,
            k,
            grid_step,
        } => commands::emit(&commands::nfermion(particles, k, grid_step)?, None),
        Command::Selftest { seed, count, n, grid } => commands::emit(&commands::selftest(seed, count, n, &grid)?, None),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => e.report(),
    }
}
