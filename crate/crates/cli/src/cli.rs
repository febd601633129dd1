use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use fixpt_core::contraction::{SumMode, VariantTag};
use fixpt_core::solver::Scheme;
use fixpt_core::NormKind;

/// Enriched fixed-point iteration and contraction certificates.
#[derive(Debug, Parser)]
#[command(name = "fixpt", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Iterate a problem with Picard, Schaefer or Jungck-Schaefer.
    Run(RunArgs),
    /// Check a contraction inequality on sampled pairs.
    VerifyContraction(VerifyContractionArgs),
    /// Validate a named (psi, phi, G) triple on grids.
    VerifyCclass(VerifyCclassArgs),
    /// Run one scheme across several averaging parameters.
    Sweep(SweepArgs),
    /// List built-in problems.
    ListProblems,
    /// List built-in C-class triples.
    ListTriples,
}

#[derive(Debug, Args, Default)]
pub struct RunArgs {
    /// Built-in problem name, or random-affine:DIM:CAP:SEED.
    #[arg(long)]
    pub problem: Option<String>,
    /// picard, schaefer or jungck-schaefer [default: schaefer]
    #[arg(long)]
    pub scheme: Option<Scheme>,
    /// Enrichment constant; sets c = 1/(1+delta).
    #[arg(long, conflicts_with = "c")]
    pub delta: Option<f64>,
    /// Averaging parameter in (0, 1] [default: 1]
    #[arg(long)]
    pub c: Option<f64>,
    /// Stop when the step residual is at most this [default: 1e-9]
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub divergence_bound: Option<f64>,
    /// l1, l2 or linf [default: l2]
    #[arg(long)]
    pub norm: Option<NormKind>,
    /// Comma-separated start point [default: the problem's]
    #[arg(long, allow_hyphen_values = true)]
    pub start: Option<String>,
    /// Write the per-iteration trace as CSV.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Write the summary here instead of stdout.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Leave coordinates out of the trace.
    #[arg(long)]
    pub no_coords: bool,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct VerifyContractionArgs {
    #[arg(long)]
    pub problem: Option<String>,
    /// hr, jungck-hr, cclass-hr or cclass-jungck-hr [default: the problem's certified variant, else hr]
    #[arg(long)]
    pub variant: Option<VariantTag>,
    /// Required for C-class variants.
    #[arg(long)]
    pub triple: Option<String>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub c1: Option<f64>,
    #[arg(long)]
    pub c2: Option<f64>,
    #[arg(long)]
    pub c3: Option<f64>,
    #[arg(long)]
    pub c4: Option<f64>,
    #[arg(long)]
    pub c5: Option<f64>,
    /// lt1 or eq1 [default: what the variant requires]
    #[arg(long)]
    pub sum_mode: Option<SumMode>,
    /// Lower corner of a cube sampling box [default: the problem's box]
    #[arg(long, allow_hyphen_values = true, requires = "box_hi")]
    pub box_lo: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires = "box_lo")]
    pub box_hi: Option<f64>,
    /// Sampler seed [default: 42]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of uniformly random pairs [default: 1000]
    #[arg(long)]
    pub pairs: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub norm: Option<NormKind>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct VerifyCclassArgs {
    #[arg(long)]
    pub triple: Option<String>,
    /// Upper end of both grids [default: 10]
    #[arg(long)]
    pub grid_max: Option<f64>,
    /// Points on the 1-D grid [default: 1001]
    #[arg(long)]
    pub grid_points: Option<usize>,
    /// Points per axis on the 2-D grid [default: 101]
    #[arg(long)]
    pub grid_axis_points: Option<usize>,
    /// Largest allowed jump between neighbouring samples [default: 1]
    #[arg(long)]
    pub max_jump: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct SweepArgs {
    #[arg(long)]
    pub problem: Option<String>,
    /// schaefer or jungck-schaefer [default: schaefer]
    #[arg(long)]
    pub scheme: Option<Scheme>,
    /// Comma-separated averaging parameters.
    #[arg(long)]
    pub c_values: Option<String>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub divergence_bound: Option<f64>,
    #[arg(long)]
    pub norm: Option<NormKind>,
    #[arg(long, allow_hyphen_values = true)]
    pub start: Option<String>,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}
