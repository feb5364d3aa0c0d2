//! Command-line arguments. Every subcommand's arguments serialize into the
//! request echo embedded in its report.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use colperm::conjugacy::RPartition;
use colperm::enumerate::DEFAULT_CAP;
use colperm::moments::Domain;
use colperm::stats::Statistic;
use colperm::TotalOrder;

use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "colperm", version, about = "Statistics, conjugacy classes and exact moments on colored permutation groups")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Worker threads (defaults to one per core).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Largest number of elements any enumeration may visit.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    pub cap: u128,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Generating function of a statistic on a group or class.
    Dist(DistArgs),
    /// Exact moment `E[stat^k]`, by one method or all of them.
    Moments(MomentsArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Orbit representative with prescribed descents.
    Canonicalize(CanonicalizeArgs),
    /// Monte-Carlo sample of a statistic on a conjugacy class.
    Sample(SampleArgs),
    /// Class sizes, or the elements of one class.
    Class(ClassArgs),
}

/// A group `S_{n,r}` or, with `--class`, one of its conjugacy classes.
#[derive(Debug, Clone, Args, Serialize)]
pub struct DomainArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub r: u32,
    /// Cycle type such as "0:[4,1]; 1:[2]".
    #[arg(long)]
    pub class: Option<String>,
}

impl DomainArgs {
    pub fn resolve(&self) -> CliResult<Domain> {
        match &self.class {
            Some(text) => {
                let lambda = RPartition::parse(text, self.r)?;
                if let Some(n) = self.n {
                    if n != lambda.n() {
                        return Err(CliError::Input(format!("--n {} does not match class {} of size {}", n, lambda, lambda.n())));
                    }
                }
                Ok(Domain::class(lambda))
            }
            None => {
                let n = self.n.ok_or_else(|| CliError::Input("either --n or --class is required".into()))?;
                Ok(Domain::group(n, self.r)?)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderArg {
    Descent,
    AdinRoichman,
}

impl OrderArg {
    pub fn total_order(self) -> TotalOrder {
        match self {
            OrderArg::Descent => TotalOrder::Descent,
            OrderArg::AdinRoichman => TotalOrder::AdinRoichman,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct DistArgs {
    /// des, maj, col, fmaj, X:i or Y:i:c.
    #[arg(long)]
    pub stat: Statistic,
    #[command(flatten)]
    #[serde(flatten)]
    pub domain: DomainArgs,
    #[arg(long, value_enum, default_value_t = OrderArg::Descent)]
    pub order: OrderArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodArg {
    ClosedForm,
    Enumeration,
    GeneratingFunction,
    All,
}

#[derive(Debug, Args, Serialize)]
pub struct MomentsArgs {
    #[arg(long)]
    pub stat: Statistic,
    #[arg(long)]
    pub k: u32,
    #[command(flatten)]
    #[serde(flatten)]
    pub domain: DomainArgs,
    #[arg(long, value_enum, default_value_t = MethodArg::All)]
    pub method: MethodArg,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[command(subcommand)]
    #[serde(flatten)]
    pub target: VerifyTarget,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "target", rename_all = "kebab-case")]
pub enum VerifyTarget {
    /// des series identity `Σ (ir+1)^n q^i`.
    Eq1(RangeArgs),
    /// fmaj product formula `[r]_q [2r]_q ⋯ [nr]_q`.
    Eq2(RangeArgs),
    /// Class moments against group moments on every class of one group.
    Theorem1(GroupKArgs),
    /// Closed forms for descent-indicator products against enumeration.
    Lemmas(LemmaArgs),
    /// des, maj and fmaj lie in the span of size-2 constraints.
    Degree(RangeArgs),
    /// Orbit sizes and unique descent representatives.
    Orbits(GroupKArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct RangeArgs {
    #[arg(long)]
    pub n_max: usize,
    #[arg(long)]
    pub r_max: u32,
    /// Series length for eq1.
    #[arg(long, default_value_t = 30)]
    pub truncation: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct GroupKArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub r: u32,
    #[arg(long)]
    pub k: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct LemmaArgs {
    #[arg(long, default_value_t = 5)]
    pub n_max: usize,
    #[arg(long, default_value_t = 3)]
    pub r_max: u32,
    #[arg(long, default_value_t = 3)]
    pub k_max: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct CanonicalizeArgs {
    /// One-line ("3^1 8^0 …") or cycle ("(1^0 2^1 …)(…)") notation.
    #[arg(long)]
    pub element: String,
    #[arg(long)]
    pub r: u32,
    /// Comma-separated descent positions.
    #[arg(long, value_delimiter = ',')]
    pub indices: Vec<u32>,
    /// Print every stage of the algorithm.
    #[arg(long)]
    pub trace: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct SampleArgs {
    #[arg(long)]
    pub stat: Statistic,
    #[arg(long)]
    pub class: String,
    #[arg(long)]
    pub r: u32,
    /// Number of draws.
    #[arg(long)]
    pub samples: u64,
    #[arg(long)]
    pub seed: u64,
    /// Write gnuplot columns (z, empirical CDF, Φ, count) to this file.
    #[arg(long)]
    pub plot_data: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ClassArgs {
    /// One class; without it every class of `S_{n,r}` is listed with its size.
    #[arg(long)]
    pub class: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub r: u32,
    /// List the elements of the class.
    #[arg(long)]
    pub list: bool,
    /// Stop listing after this many elements.
    #[arg(long)]
    pub limit: Option<u64>,
}
