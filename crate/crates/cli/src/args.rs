use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sparsefair_core::PerfMetric;

#[derive(Debug, Parser)]
#[command(name = "sparsefair", version, about = "Group fairness evaluation through sparsity measures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a fairness criterion on a CSV of predictions.
    Evaluate(EvaluateArgs),
    /// Check sparsity axioms and theorems numerically.
    Check(CheckArgs),
    /// Criterion values as the number of groups grows.
    Sweep(SweepArgs),
    /// Measure values over the 3-dimensional probability simplex.
    Surface(SurfaceArgs),
    /// Write a simulated scenario as CSV.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Classification,
    Regression,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CriterionArg {
    /// Statistical parity (class rates, or prediction CDFs sup-distance for regression).
    Sp,
    /// Sparsity-based equalized odds over per-group performance.
    Eo,
    /// Conditional-rate equalized odds with MPD (classification).
    EoClassic,
    /// Parity of mean predictions (regression).
    SpWeak,
    /// Integrated CDF parity (regression).
    SpW,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureArg {
    Mpd,
    Gini,
    Pq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TransformArg {
    None,
    Exp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AggArg {
    Max,
    Mean,
    Sum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum UndefinedArg {
    Error,
    Drop,
}

/// Column bindings and group construction shared by `evaluate` and `sweep`.
#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    #[arg(long, value_enum, default_value_t = Task::Classification)]
    pub task: Task,
    #[arg(long, default_value = "y_true")]
    pub label_col: String,
    #[arg(long, default_value = "y_pred")]
    pub pred_col: String,
    /// Prefix of per-class score columns (`score_<class>`).
    #[arg(long, default_value = "score_")]
    pub score_prefix: String,
    /// Explicit class set, in order; default is the union of observed labels.
    #[arg(long, value_delimiter = ',')]
    pub classes: Option<Vec<String>>,
    /// Quantile-bin a numeric group column, e.g. `age=5`. Repeatable.
    #[arg(long = "bins", value_name = "COL=K")]
    pub bins: Vec<String>,
    #[arg(long, default_value_t = 1)]
    pub min_group_size: usize,
    #[arg(long)]
    pub drop_small_groups: bool,
}

/// Criterion options shared by `evaluate` and `sweep`.
#[derive(Debug, Clone, Args)]
pub struct CriterionArgs {
    #[arg(long, value_enum, default_value_t = CriterionArg::Sp)]
    pub criterion: CriterionArg,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    /// Per-group metric for `eo` (default tpr_fpr_avg, or mse for regression).
    #[arg(long, value_parser = parse_metric)]
    pub metric: Option<PerfMetric>,
    /// One-vs-rest accuracy / cross entropy.
    #[arg(long)]
    pub per_class: bool,
    /// Residual variance for the log_likelihood metric.
    #[arg(long, default_value_t = 1.0)]
    pub variance: f64,
    #[arg(long, value_enum, default_value_t = AggArg::Max)]
    pub agg: AggArg,
    #[arg(long, value_enum, default_value_t = TransformArg::None)]
    pub transform: TransformArg,
    /// What to do with groups whose metric is undefined for a class.
    #[arg(long, value_enum, default_value_t = UndefinedArg::Error)]
    pub on_undefined: UndefinedArg,
}

fn parse_metric(s: &str) -> Result<PerfMetric, String> {
    s.parse().map_err(|e: sparsefair_core::Error| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Sensitive attribute columns; several columns form intersectional groups.
    #[arg(long, value_delimiter = ',', required = true)]
    pub group_cols: Vec<String>,
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub criterion: CriterionArgs,
    /// Default pq (mpd for eo-classic).
    #[arg(long, value_enum)]
    pub measure: Option<MeasureArg>,
    /// Recorded in the report; evaluation itself is deterministic.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    /// Property ids (`d1`, `T33_L2DIST`, ...), or `axioms`, `theorems`, `all`.
    #[arg(long, value_delimiter = ',', default_value = "axioms")]
    pub properties: Vec<String>,
    #[arg(long, value_enum, default_value_t = MeasureArg::Pq)]
    pub measure: MeasureArg,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 2)]
    pub dim_min: usize,
    #[arg(long, default_value_t = 64)]
    pub dim_max: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepMode {
    /// Exact population class rates of the multigroup scenario.
    Population,
    /// Rates estimated from generated samples, averaged over seeds.
    Sampled,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Group counts for the multigroup scenario.
    #[arg(long, value_delimiter = ',', default_value = "2,5,10,20,50")]
    pub counts: Vec<usize>,
    #[arg(long, value_enum, default_value_t = SweepMode::Population)]
    pub mode: SweepMode,
    /// Samples per group in sampled mode.
    #[arg(long, default_value_t = 100_000)]
    pub per_group: usize,
    /// Number of seeds in sampled mode, starting at `--seed`.
    #[arg(long, default_value_t = 3)]
    pub seeds: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "mpd,pq")]
    pub measures: Vec<MeasureArg>,
    /// Evaluate a CSV under several groupings instead of the scenario.
    #[arg(long, requires = "groupings")]
    pub input: Option<PathBuf>,
    /// Attribute lists separated by `;`, e.g. `gender;gender,race`.
    #[arg(long, value_delimiter = ';', requires = "input")]
    pub groupings: Vec<String>,
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub criterion: CriterionArgs,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SurfaceArgs {
    /// Grid points per axis.
    #[arg(long, default_value_t = 31)]
    pub resolution: usize,
    #[arg(long, value_enum, default_value_t = MeasureArg::Pq)]
    pub measure: MeasureArg,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioArg {
    MultigroupCls,
    TwogroupCls,
    TwogroupReg,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub scenario: ScenarioArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub n_groups: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Per-group noise variances for the regression scenario.
    #[arg(long, value_delimiter = ',')]
    pub noise_var: Option<Vec<f64>>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}
