//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::record::OutputFormat;

#[derive(Debug, Parser)]
#[command(
    name = "gridgame",
    version,
    about = "Attacker-defender games over cascading failures in power grids"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Attack (and optionally defend) explicit nodes and report payoff and cascade rounds.
    Simulate(SimulateArgs),
    /// Per-node nodal load with single-attack payoff, and per-edge load with capacity.
    Loads(CommonArgs),
    /// Best response of one side against a fixed opponent.
    Respond(RespondArgs),
    /// Minimax value and mixed strategies via double oracle.
    Solve(CommonArgs),
    /// Minimax, DLB and uniform-attack rows over a grid of capacity margins and budgets.
    Sweep(SweepArgs),
    /// Write a seeded synthetic grid file.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// TOML file with default values for any of these flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Grid file to load.
    #[arg(long, conflicts_with = "synthetic")]
    pub grid: Option<PathBuf>,
    /// Synthetic grid as N,M,SRC,LD (nodes, edges, source and load fractions).
    #[arg(long, value_name = "N,M,SRC,LD")]
    pub synthetic: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Capacity margin.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Attacker budget.
    #[arg(long)]
    pub ka: Option<usize>,
    /// Defender budget.
    #[arg(long)]
    pub kd: Option<usize>,
    #[arg(long, value_parser = ["exact", "greedy"])]
    pub oracle: Option<String>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    #[arg(long)]
    pub format: Option<OutputFormat>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Record wall-clock seconds (otherwise 0, keeping output reproducible).
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Attacked node ids, comma separated.
    #[arg(long, value_name = "ID,ID,...")]
    pub attack: Option<String>,
    /// Defended node ids, comma separated.
    #[arg(long, value_name = "ID,ID,...")]
    pub defend: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SideArg {
    Attacker,
    Defender,
}

#[derive(Debug, Clone, Args)]
pub struct RespondArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Responding side.
    #[arg(long, value_enum)]
    pub side: Option<SideArg>,
    /// Fixed attack for a defender response (default: uniform over load subsets).
    #[arg(long, value_name = "ID,ID,...")]
    pub attack: Option<String>,
    /// Fixed defense for an attacker response (default: DLB).
    #[arg(long, value_name = "ID,ID,...")]
    pub defend: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BudgetMode {
    /// k_a = k_d = b
    Equal,
    /// k_a fixed by --ka, k_d = b
    VaryKd,
    /// k_d fixed by --kd, k_a = b
    VaryKa,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Capacity margins to sweep (default: --alpha).
    #[arg(long, value_delimiter = ',')]
    pub alphas: Option<Vec<f64>>,
    /// Budgets to sweep; how they apply is set by --budget-mode.
    #[arg(long, value_delimiter = ',')]
    pub budgets: Option<Vec<usize>>,
    #[arg(long, value_enum)]
    pub budget_mode: Option<BudgetMode>,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(long, value_name = "N,M,SRC,LD")]
    pub synthetic: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
