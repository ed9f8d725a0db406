//! Command surface for the CNOT brickwork automaton toolkit.
//!
//! Subcommands map onto the library's analysis entry points and emit CSV
//! (and PGM heatmaps) with deterministic bytes for a fixed configuration.
//! Exit codes: 0 on success, 1 for argument errors, 2 for numeric-contract
//! violations (phase tracking, Hermiticity, eigenvalue bounds).

pub mod commands;
pub mod output;
pub mod random;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use cnotca::lattice::BoundaryCondition;

#[derive(Debug, Parser)]
#[command(
    name = "cnotca",
    about = "Simulate a 1-D CNOT brickwork automaton and analyze its entropy dynamics",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BcArg {
    Open,
    Periodic,
}

impl From<BcArg> for BoundaryCondition {
    fn from(bc: BcArg) -> Self {
        match bc {
            BcArg::Open => BoundaryCondition::Open,
            BcArg::Periodic => BoundaryCondition::Periodic,
        }
    }
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Parser)]
pub struct CommonArgs {
    /// Number of lattice sites (must be even).
    #[arg(long, default_value_t = 50)]
    pub n: usize,

    /// Boundary conditions.
    #[arg(long, value_enum, default_value_t = BcArg::Open)]
    pub bc: BcArg,

    /// Polar Bloch angle of the initial single-qubit state, in radians.
    #[arg(long, default_value_t = 0.2)]
    pub theta: f64,

    /// Azimuthal Bloch angle of the initial single-qubit state, in radians.
    #[arg(long, default_value_t = 0.0)]
    pub phi: f64,

    /// Number of circuit steps for grid and verification commands.
    #[arg(long, default_value_t = 70)]
    pub steps: u64,

    /// Seed for randomized self-checks.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Output path prefix; commands append .csv / .pgm.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Series length for fractal and decay-fit commands.
    #[arg(long, default_value_t = 1024)]
    pub tmax: u64,

    /// Edge margin of the thermodynamic-limit window, in sites.
    #[arg(long, default_value_t = 4)]
    pub margin: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Single-site entropy map over time; writes `<out>.csv` and `<out>.pgm`.
    EntropyMap(CommonArgs),
    /// Nearest-neighbor mutual information map; writes `<out>.csv` and `<out>.pgm`.
    MutualInfo(CommonArgs),
    /// Popcount series of a bulk seed with fractal-dimension fit and
    /// flashback table; writes `<out>.csv`.
    Fractal(CommonArgs),
    /// Equilibration fits of the bulk Bloch radius; writes `<out>.csv`.
    FitDecay(CommonArgs),
    /// Boundary charge orbits and oscillation verification as CSV on stdout.
    Charges(CommonArgs),
    /// Compare the fast path against the dense oracle; prints max_abs_dev.
    OracleCheck(CommonArgs),
}

/// Process outcome carrying the intended exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or configuration (exit 1).
    Arg(String),
    /// Numeric-contract violation (exit 2).
    Numeric(String),
    /// Filesystem failure (exit 1).
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Arg(msg) => write!(f, "argument error: {msg}"),
            CliError::Numeric(msg) => write!(f, "numeric contract violation: {msg}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl CliError {
    #[must_use]
    pub const fn exit_code(&self) -> i32 {
        match self {
            CliError::Arg(_) | CliError::Io(_) => 1,
            CliError::Numeric(_) => 2,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<cnotca::Error> for CliError {
    fn from(e: cnotca::Error) -> Self {
        use cnotca::Error as E;
        match e {
            E::PhaseContract(_)
            | E::NotHermitian(_)
            | E::BadTrace(_)
            | E::EigenvalueRange(_)
            | E::NoConvergence => CliError::Numeric(e.to_string()),
            _ => CliError::Arg(e.to_string()),
        }
    }
}

/// Runs the parsed command, writing any files and printing to stdout.
///
/// # Errors
/// See [`CliError`] for the exit-code mapping.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::EntropyMap(args) => commands::entropy_map(args),
        Command::MutualInfo(args) => commands::mutual_info(args),
        Command::Fractal(args) => commands::fractal(args),
        Command::FitDecay(args) => commands::fit_decay(args),
        Command::Charges(args) => commands::charges(args),
        Command::OracleCheck(args) => commands::oracle_check(args),
    }
}
