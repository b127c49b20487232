use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fuzzyci_core::verify::DEFAULT_SEED;
use fuzzyci_core::Grid;

pub const OUTPUT_DIR_ENV: &str = "FUZZYCI_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "fuzzyci", version, about = "Optimal fuzzy confidence intervals: memberships, coverage, expected length")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Membership values on a (ω, τ) grid. Columns: tau, omega, psi.
    Membership(MembershipArgs),
    /// Expected length and its lower bound over θ. Columns: theta, el, lower_bound.
    ElCurve(CurveArgs),
    /// The lower bound alone. Columns: theta, lower_bound.
    LowerBound(CurveArgs),
    /// Coverage probability over τ. Columns: tau, coverage.
    Coverage(CoverageArgs),
    /// Solve a fractional or 0/1 knapsack read from `weight,value` rows.
    Knapsack(KnapsackArgs),
    /// Run the built-in acceptance checks.
    SelfTest(SelfTestArgs),
    /// Run every command listed in a TOML recipe.
    Recipe(RecipeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Binomial,
    Poisson,
    Normal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Method {
    Proposed,
    AgrestiCoull,
    Score,
    /// Normal only: `x ± z σ/√n`, ignoring any bounds.
    Standard,
    /// Normal only: the standard interval intersected with `[a, b]`.
    TruncatedStandard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KnapsackMode {
    Fractional,
    Dp,
    Roundtrip,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long, value_enum, default_value_t = Method::Proposed)]
    pub method: Method,
    #[arg(long, default_value_t = 0.95)]
    pub gamma: f64,
    /// Binomial trials, or the normal sample size (default 1).
    #[arg(long)]
    pub n: Option<u64>,
    /// Reference point of the proposed membership.
    #[arg(long)]
    pub o: Option<f64>,
    /// Normal standard deviation (default 1).
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Lower end of a bounded normal mean.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// Upper end of a bounded normal mean.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// Poisson: upper end of the τ integration range.
    #[arg(long)]
    pub tau_max: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; relative paths are resolved against $FUZZYCI_OUTPUT_DIR
    /// when set. Standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct MembershipArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub tau_grid: Grid,
    /// Largest Poisson count to tabulate.
    #[arg(long, default_value_t = 20)]
    pub omega_max: u64,
    /// Normal: grid of observed sample means.
    #[arg(long, allow_hyphen_values = true)]
    pub x_grid: Option<Grid>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Defaults: binomial 0.001:0.999:401, Poisson 0.01:20:401, normal a:b:401.
    #[arg(long, allow_hyphen_values = true)]
    pub theta_grid: Option<Grid>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CoverageArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub tau_grid: Grid,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct KnapsackArgs {
    /// CSV file of `weight,value` rows; an optional header row is skipped.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub capacity: f64,
    #[arg(long, value_enum, default_value_t = KnapsackMode::Fractional)]
    pub mode: KnapsackMode,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SelfTestArgs {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RecipeArgs {
    pub file: PathBuf,
    /// Directory for the recipe's outputs; overrides the recipe file and
    /// $FUZZYCI_OUTPUT_DIR.
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
}
