//! `wigner`: command-line front end for the Wigner-crystal entanglement pipelines.

mod commands;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use wigner_core::Error;

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CONVERGENCE: u8 = 3;
pub const EXIT_UNSUPPORTED: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "wigner", version, about = "Entanglement of trapped one-dimensional Wigner crystals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Strong-interaction limit: equilibrium, modes, site kernels, occupancies and entropies.
    Asymptotic(SystemArgs),
    /// Asymptotic entropy for N = 2..=n-max.
    Sweep(SweepArgs),
    /// Finite interaction strength (d = 1) from the optimized Jastrow state.
    Finite(FiniteArgs),
    /// Interaction strength at which the two-body series terminates.
    MagicG(MagicArgs),
    /// Classical equilibrium positions.
    Equilibrium(EquilibriumArgs),
    /// Normal modes of the classical crystal.
    Modes(SystemArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct SystemArgs {
    /// Number of particles (at least 2).
    #[arg(long)]
    pub n: usize,
    /// Interaction exponent d > 0 in g/|x|^d.
    #[arg(long, default_value_t = 1.0)]
    pub d: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct EquilibriumArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub system: SystemArgs,
    /// Interaction strength; positions are reported in the g-independent scaled form when omitted.
    #[arg(long)]
    pub g: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    /// Interaction exponent d > 0.
    #[arg(long, default_value_t = 1.0)]
    pub d: f64,
    /// Largest particle count, at most 20.
    #[arg(long, default_value_t = 8)]
    pub n_max: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct MagicArgs {
    /// Number of series terms after the leading one (n >= 1).
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntegratorArg {
    Quadrature,
    MonteCarlo,
}

#[derive(Debug, Args, Serialize)]
#[command(group(clap::ArgGroup::new("strength").required(true).args(["g", "magic_n"])))]
pub struct FiniteArgs {
    /// Number of particles (at least 2).
    #[arg(long)]
    pub n: usize,
    /// Interaction exponent; only d = 1 is supported.
    #[arg(long, default_value_t = 1.0)]
    pub d: f64,
    /// Interaction strength (g = 0 is the hard-core limit).
    #[arg(long)]
    pub g: Option<f64>,
    /// Use the k-th magic strength and its exact pair factor.
    #[arg(long)]
    pub magic_n: Option<usize>,
    /// Nyström grid points (overrides --dy).
    #[arg(long)]
    pub grid_k: Option<usize>,
    /// Nyström half-extent [default: outermost classical position + 4].
    #[arg(long)]
    pub grid_c: Option<f64>,
    /// Nyström spacing.
    #[arg(long, default_value_t = wigner_core::finite::pipeline::DEFAULT_DY)]
    pub dy: f64,
    /// Fixed Jastrow scale; skips the variational search.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Integration method [default: quadrature for N <= 3, Monte Carlo above].
    #[arg(long, value_enum)]
    pub integrator: Option<IntegratorArg>,
    /// Monte Carlo seed.
    #[arg(long, default_value_t = wigner_core::finite::monte_carlo::DEFAULT_SEED)]
    pub seed: u64,
    /// Monte Carlo single-particle steps.
    #[arg(long, default_value_t = wigner_core::finite::monte_carlo::DEFAULT_SAMPLES)]
    pub samples: usize,
}

pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Domain(_) | Error::InvalidArgument(_) => EXIT_USAGE,
        Error::Unsupported(_) => EXIT_UNSUPPORTED,
        _ => EXIT_CONVERGENCE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(commands::Failure::Core(err)) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
        Err(commands::Failure::Io(err)) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
