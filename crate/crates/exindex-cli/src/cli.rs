//! Command-line surface: argument structs and the flag → config resolution.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use exindex::config::{parse_k_range, parse_levels, parse_selection_config, resolve_estimator};
use exindex::selection::{EstimatorChoice, SelectionConfig};

#[derive(Parser)]
#[command(
    name = "exindex",
    version,
    about = "Extremal-index estimation with automatic threshold selection"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Simulate a benchmark process and write it as CSV
    Simulate(SimulateArgs),
    /// Point estimates of the extremal index at each quantile level
    Estimate(EstimateArgs),
    /// Run the full threshold-selection algorithm on a data file
    SelectThreshold(SelectThresholdArgs),
    /// Run a Monte Carlo benchmark plan and write the report files
    Benchmark(BenchmarkArgs),
    /// Tail goodness-of-fit statistic of a hypothesized distribution
    GofTest(GofTestArgs),
    /// Print reference constants and quantiles of the ω² limit law
    Cms(CmsArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Tsv,
}

impl Format {
    pub fn delimiter(self) -> u8 {
        match self {
            Format::Csv => b',',
            Format::Tsv => b'\t',
        }
    }
}

#[derive(Args)]
pub struct DataArgs {
    /// Input data file (CSV with a header row)
    #[arg(long)]
    pub input: PathBuf,
    /// Column to read: 0-based index or header name
    #[arg(long, default_value = "0")]
    pub column: String,
    /// What to do with empty or non-numeric cells
    #[arg(long, value_enum, default_value_t = Missing::Drop)]
    pub missing: Missing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Missing {
    Drop,
    Fail,
}

#[derive(Args)]
pub struct SelectionArgs {
    /// Key-value configuration file; flags below override its entries
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Quantile levels: `a,b,c` or `start:stop:step`
    #[arg(long)]
    pub levels: Option<String>,
    /// Solution rule: equation | inequality
    #[arg(long)]
    pub mode: Option<String>,
    /// Equation-mode reference value
    #[arg(long)]
    pub delta1: Option<f64>,
    /// Inequality-mode reference value
    #[arg(long)]
    pub delta2: Option<f64>,
    /// Statistic depth rule: pilot_l | min_pilot_sqrt | log_squared | fixed_theta:<s>
    #[arg(long = "k-rule")]
    pub k_rule: Option<String>,
    /// Estimator: intervals | kgaps | kgaps:<K> | k0 | k0:<k>
    #[arg(long)]
    pub estimator: Option<String>,
    /// Inclusive K scan range `lo..hi` for a bare `kgaps`
    #[arg(long = "K-range")]
    pub k_range: Option<String>,
}

impl SelectionArgs {
    /// Configuration file (or defaults) with flag overrides applied.
    pub fn resolve(&self) -> Result<SelectionConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("cannot read {}", path.display()))?;
                parse_selection_config(&text)
                    .with_context(|| format!("config {}", path.display()))?
            }
            None => SelectionConfig::default(),
        };
        if let Some(v) = &self.levels {
            cfg.levels = parse_levels(v)?;
        }
        if let Some(v) = &self.mode {
            cfg.mode = v.parse()?;
        }
        if let Some(v) = self.delta1 {
            cfg.delta1 = v;
        }
        if let Some(v) = self.delta2 {
            cfg.delta2 = v;
        }
        if let Some(v) = &self.k_rule {
            cfg.k_rule = v.parse()?;
        }
        let k_range = self.k_range.as_deref().map(parse_k_range).transpose()?;
        if let Some(est) = &self.estimator {
            cfg.estimator = resolve_estimator(est, k_range)?;
        } else if let Some((lo, hi)) = k_range {
            cfg.estimator = EstimatorChoice::KGapsScan { lo, hi };
        }
        if k_range.is_some() && !matches!(cfg.estimator, EstimatorChoice::KGapsScan { .. }) {
            bail!("--K-range applies only to a K-gaps scan estimator");
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
pub struct SimulateArgs {
    /// Process spec, e.g. armax(0.75), mm(0.5;0.3;0.2), iid(frechet)
    #[arg(long)]
    pub process: String,
    /// Series length
    #[arg(long, default_value_t = 5000)]
    pub n: usize,
    /// Simulation seed
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output file (stdout when omitted)
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub selection: SelectionArgs,
    /// Output file for the per-level table (stdout when omitted)
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args)]
pub struct SelectThresholdArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub selection: SelectionArgs,
    /// Optional file for the solution table; the summary goes to stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args)]
pub struct BenchmarkArgs {
    /// Experiment plan file
    #[arg(long)]
    pub config: PathBuf,
    /// Master seed override
    #[arg(long)]
    pub seed: Option<u64>,
    /// Sample-size override for every process
    #[arg(long)]
    pub n: Option<usize>,
    /// Replication-count override for every process
    #[arg(long)]
    pub reps: Option<usize>,
    /// Full-scale run: n = 100000, reps = 1000 (unless --n/--reps say otherwise)
    #[arg(long = "paper-scale")]
    pub paper_scale: bool,
    /// Worker threads (0 = automatic)
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Report file; the log and curve files are written next to it
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args)]
pub struct GofTestArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Null distribution: frechet | uniform | exponential | gaussian | cauchy | pareto:<α>
    #[arg(long)]
    pub dist: String,
    /// Number of top order statistics
    #[arg(long)]
    pub k: usize,
}

#[derive(Args)]
pub struct CmsArgs {
    /// Probabilities to tabulate, comma-separated (default: a standard set)
    #[arg(long)]
    pub quantiles: Option<String>,
}
