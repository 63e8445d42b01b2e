use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "equilib", version, about = "Equilibrium and signed equilibrium measures in discrete external fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: CommonArgs,
}

/// Flags shared by every subcommand. Any flag given here overrides the
/// same key in the `--config` file.
#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// Height of the attractor.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub beta1: Option<f64>,

    /// Height of the repellent.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub beta2: Option<f64>,

    /// Strength of the repellent.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub gamma: Option<f64>,

    /// Put both charges on the imaginary axis.
    #[arg(long, global = true)]
    pub symmetric: bool,

    /// Charge set file, one `re im strength` per line.
    #[arg(long, global = true, value_name = "FILE")]
    pub charges: Option<PathBuf>,

    /// Left end of the oracle grid.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub grid_lo: Option<f64>,

    /// Right end of the oracle grid.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub grid_hi: Option<f64>,

    /// Number of oracle grid nodes.
    #[arg(long, global = true)]
    pub grid_n: Option<usize>,

    /// Write the CSV here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Worker threads for sweeps and the oracle (default: available parallelism).
    #[arg(long, global = true, env = "EQUILIB_JOBS")]
    pub jobs: Option<usize>,

    /// Half-width in gamma of the band labelled as a phase transition.
    #[arg(long, global = true)]
    pub transition_band: Option<f64>,

    /// Flat `key = value` configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Phase label, thresholds, circle and closed-form constants of a pair.
    Phase,
    /// Equilibrium and signed densities of a pair on a uniform sample.
    Density(SampleArgs),
    /// Equilibrium and positive-part endpoints along a gamma sweep.
    SupportEvolution(SweepArgs),
    /// Phase of every point of a (beta1, beta2) lattice at fixed gamma.
    PhaseRegion(RegionArgs),
    /// Signed equilibrium density of a pair or a charge set.
    SignedDensity(SampleArgs),
    /// Compare the grid oracle against the closed forms.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub x_lo: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub x_hi: Option<f64>,
    /// Number of sample points, both ends included.
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub gamma_lo: Option<f64>,
    #[arg(long)]
    pub gamma_hi: Option<f64>,
    #[arg(long)]
    pub gamma_step: Option<f64>,
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    /// Largest beta on both axes.
    #[arg(long)]
    pub beta_max: Option<f64>,
    /// Lattice steps per axis.
    #[arg(long)]
    pub beta_n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Bound on both Frostman violations.
    #[arg(long)]
    pub frostman_tol: Option<f64>,
    /// Bound on the relative sup-norm density mismatch.
    #[arg(long)]
    pub density_tol: Option<f64>,
    /// Bound on the endpoint mismatch, in grid cells.
    #[arg(long)]
    pub support_cells: Option<f64>,
}
