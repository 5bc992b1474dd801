use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "vblowup", version, about = "Blow-up time estimates from collocation solutions of Volterra integral equations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate the blow-up time for one collocation parameter and each stepsize.
    Run(RunArgs),
    /// Estimate blow-up times over a grid of collocation parameters.
    Sweep(SweepArgs),
    /// Find where the sweep curves of two stepsizes cross.
    Intersect(SweepArgs),
    /// Check the standing assumptions and the necessary conditions for blow-up.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
pub struct ProblemArgs {
    /// Built-in example (1 to 4).
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=4), required_unless_present = "problem", conflicts_with = "problem")]
    pub example: Option<u32>,
    /// Problem file (TOML).
    #[arg(long, value_name = "FILE")]
    pub problem: Option<PathBuf>,
    /// Reference blow-up time for relative errors; overrides the problem's own.
    #[arg(long = "ref", value_name = "T")]
    pub reference: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Collocation case: 1 (one point c1 > 0) or 2 (points 0 and c2).
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub case: Option<u8>,
    #[arg(long, conflicts_with = "c2", allow_negative_numbers = true)]
    pub c1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c2: Option<f64>,
    /// Parameter grid as start:end:step.
    #[arg(long = "c-grid", value_name = "A:B:STEP", conflicts_with_all = ["c1", "c2"])]
    pub c_grid: Option<String>,
    /// Initial stepsizes, comma separated.
    #[arg(long, value_delimiter = ',', required = true, num_args = 1.., allow_negative_numbers = true)]
    pub h: Vec<f64>,
    #[arg(long, default_value_t = 100.0)]
    pub horizon: f64,
    /// Stop once the stepsize falls below this.
    #[arg(long = "step-tol", default_value_t = 1e-12)]
    pub step_tol: f64,
    /// Factor applied to the stepsize when no fixed point exists.
    #[arg(long, default_value_t = 0.5)]
    pub halve: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write to this file instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Add a metadata line with the program version and current time.
    #[arg(long)]
    pub stamp: bool,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub solve: SolveArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub solve: SolveArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Abel exponent of the kernel, `k(u) = u^(alpha-1) / Gamma(alpha)`.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Lower limit of the integral condition.
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}
