use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "haar-walk", version, about = "Random walks on compact groups: exact analysis and Monte Carlo verification")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Overrides the seed in the config file.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Maximum `replicas × N` steps per simulated batch.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Truncation tolerance for series and the `C = 0` test.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, global = true, default_value = ".")]
    pub out_dir: PathBuf,
    /// Failing verdicts are expected: mark them and exit 0.
    #[arg(long, global = true)]
    pub expect_fail: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Group structure.
    Group {
        #[command(subcommand)]
        command: GroupCommand,
    },
    /// Irreducible representation tables.
    Dual {
        #[command(subcommand)]
        command: DualCommand,
    },
    /// Support predicates of a measure.
    Measure {
        #[command(subcommand)]
        command: MeasureCommand,
    },
    /// Rate, Δ table and variance constant; writes analysis.json and rates.csv.
    Analyze(InstanceArgs),
    /// Runs a batch and writes per-replica checkpoint sums and cell counts.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Sums CSV; counts go next to it with a `.counts.csv` suffix.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Checks the limit laws end to end.
    Verify {
        law: LawChoice,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Merges analysis and verification JSON into one summary.
    Report {
        /// JSON files or directories containing them.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Writes the summary here; `.csv` selects CSV, anything else text.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum GroupCommand {
    Info {
        /// `cyclic:N`, `dihedral:N`, `symmetric:N`, `quaternion8`, `circle` or a Cayley-table file.
        #[arg(long)]
        spec: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum DualCommand {
    Validate {
        #[arg(long)]
        group: String,
        /// Dual file; built-in groups default to their shipped table.
        #[arg(long)]
        dual: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum MeasureCommand {
    Check {
        /// Measure file with a `group` key.
        #[arg(long, conflicts_with_all = ["group", "measure"])]
        spec: Option<PathBuf>,
        #[arg(long, requires = "measure")]
        group: Option<String>,
        #[arg(long, requires = "group")]
        measure: Option<String>,
    },
}

#[derive(Debug, Args)]
pub struct InstanceArgs {
    #[arg(long, conflicts_with_all = ["group", "measure", "function"])]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long)]
    pub measure: Option<String>,
    #[arg(long)]
    pub function: Option<String>,
    #[arg(long)]
    pub dual: Option<PathBuf>,
    /// Berry–Esseen exponent δ ∈ (0, 1].
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
    /// Rows in the Δ_k table.
    #[arg(long, default_value_t = 64)]
    pub table_len: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LawChoice {
    Slln,
    Lil,
    Clt,
    Moments,
    All,
}
