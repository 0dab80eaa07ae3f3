use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

#[derive(Debug, Parser)]
#[command(name = "frw", version, about = "Scale-factor solutions of barotropic FRW cosmologies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the solution family of a parameter set.
    Classify(ClassifyArgs),
    /// Sample a(t) on a grid with one method or all of them.
    Solve(SolveArgs),
    /// Run the verification suite or a subset of its groups.
    Validate(ValidateArgs),
    /// Evaluate the Gauss hypergeometric function 2F1(a, b; c; x).
    Hyp2f1(Hyp2f1Args),
    /// Write sampled versions of the solution tables plus a gnuplot script.
    Table(TableArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Closed,
    Ode,
    Quadrature,
    Hypergeometric,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableName {
    RadiationCurved,
    FlatRadiation,
    ZeroLambdaFlat,
    ZeroLambdaClosed,
    ZeroLambdaOpen,
    All,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ParamFlags {
    /// γ̄ = (3γ − 2)/2: 1 radiation, 1/2 dust, −1 vacuum.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma_bar: Option<f64>,
    /// Spatial curvature: −1, 0 or 1.
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: Option<i64>,
    /// Cosmological constant (default 0).
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    /// Integration constant C₁ (default a0^(2γ̄), or a0^(−2) for vacuum).
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    /// Reference scale factor (default 1).
    #[arg(long, allow_hyphen_values = true)]
    pub a0: Option<f64>,
    /// Reference time (default 0).
    #[arg(long, allow_hyphen_values = true)]
    pub t0: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GridFlags {
    #[arg(long, allow_hyphen_values = true)]
    pub t_start: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t_end: Option<f64>,
    /// Number of grid points, both ends included (default 101).
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutputFlags {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file (directory for `table`); stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// TOML or JSON file with the same keys as the long flags.
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub params: ParamFlags,
    #[command(flatten)]
    pub output: OutputFlags,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub params: ParamFlags,
    #[command(flatten)]
    pub grid: GridFlags,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    /// Sign selection (s, σ, ε) for curved radiation, e.g. `++-`.
    #[arg(long, allow_hyphen_values = true)]
    pub branch: Option<String>,
    #[command(flatten)]
    pub output: OutputFlags,
    /// Worker threads for `--method all`.
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    pub config: Option<PathBuf>,
    /// Comma-separated check groups (default: all).
    #[arg(long, value_delimiter = ',')]
    pub subset: Vec<String>,
    /// Replace every declared tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub output: OutputFlags,
    /// Run groups on this many threads.
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct Hyp2f1Args {
    #[arg(allow_negative_numbers = true)]
    pub a: f64,
    #[arg(allow_negative_numbers = true)]
    pub b: f64,
    #[arg(allow_negative_numbers = true)]
    pub c: f64,
    #[arg(allow_negative_numbers = true)]
    pub x: f64,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub table: Option<TableName>,
    /// Curvature of the curved radiation table (default: both signs).
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: Option<i64>,
    /// Samples per file (default 201).
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    pub output: OutputFlags,
    /// Rows computed in parallel; output order does not depend on it.
    #[arg(long)]
    pub jobs: Option<usize>,
}
