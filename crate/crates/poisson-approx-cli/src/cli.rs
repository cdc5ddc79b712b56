use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "poisson-approx",
    version,
    about = "Poisson approximation bounds for Bernoulli sums"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Print reports as a JSON array.
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,

    /// Print reports as CSV.
    #[arg(long, global = true)]
    pub csv: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Total variation bounds, with the exact distance for n <= 20.
    TvBounds {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        schedule: ScheduleArgs,
    },
    /// Relative entropy bounds, with the exact value for n <= 20.
    KlBounds {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        schedule: ScheduleArgs,
    },
    /// The improved lower-bound coefficient K1 and its closed form.
    K1 {
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
        /// Only evaluate the closed form.
        #[arg(long)]
        closed_form: bool,
        #[command(flatten)]
        schedule: ScheduleArgs,
    },
    /// Bounds on |H(Po(λ)) - H(W)|.
    EntropyBounds {
        #[command(flatten)]
        spec: SpecArgs,
        /// Dependency model file (TOML); replaces --p/--profile.
        #[arg(long, conflicts_with_all = ["p", "profile"])]
        model: Option<PathBuf>,
    },
    /// Rows of the worked examples.
    Example {
        #[command(subcommand)]
        which: ExampleCommand,
    },
    /// Sample sizes from a lower bound on an error exponent.
    Plan {
        #[arg(long, value_enum)]
        mode: PlanMode,
        #[arg(long)]
        epsilon: f64,
        /// Use this exponent directly instead of bounding it from a spec.
        #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["p", "profile"])]
        d_lower: Option<f64>,
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        schedule: ScheduleArgs,
    },
    /// Full tables and figure data (CSV unless --json).
    Tables {
        #[arg(long, value_enum)]
        which: TableKind,
        #[command(flatten)]
        schedule: ScheduleArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum ExampleCommand {
    /// Vertices of out-degree k in a randomly directed n-cube.
    RandomGraph {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
    },
    /// Level crossings of a Gaussian moving average.
    Gaussian {
        #[arg(long)]
        n: f64,
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlanMode {
    /// Type-II error with relative entropy.
    Stein,
    /// Bayesian error with Chernoff information.
    Bayes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    #[value(name = "1")]
    RandomGraph,
    #[value(name = "2")]
    MovingAverage,
    #[value(name = "fig1")]
    TvRatios,
    #[value(name = "fig2")]
    BinomialKl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProfileKind {
    Linear,
    Geometric,
}

/// A Bernoulli sum, either listed or generated from a profile.
#[derive(Debug, Args)]
pub struct SpecArgs {
    /// Success probabilities, comma separated.
    #[arg(
        long,
        value_delimiter = ',',
        allow_negative_numbers = true,
        conflicts_with = "profile"
    )]
    pub p: Option<Vec<f64>>,
    #[arg(long, value_enum, requires_all = ["n", "lambda"])]
    pub profile: Option<ProfileKind>,
    /// Number of summands for --profile.
    #[arg(long)]
    pub n: Option<usize>,
    /// Mean for --profile.
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    /// Ratio for --profile geometric.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ScheduleArgs {
    /// Grid-search schedule file (TOML).
    #[arg(long)]
    pub schedule: Option<PathBuf>,
}
