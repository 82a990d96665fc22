use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use wonderful::autgroup::SEARCH_BUDGET;
use wonderful::gf;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Table {
    Lambda,
    Nu,
    Rank,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChowOp {
    Canonical,
    SwapCheck,
    Surface,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FanAction {
    Certify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ChartAction {
    Test,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AutAction {
    Search,
    Realize,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum Command {
    /// Tables of λ, ν and exceptional-divisor Picard ranks, with inequality checks
    Count {
        #[arg(long, value_enum)]
        table: Option<Table>,
    },
    /// List the subspaces of one dimension in canonical order
    Enumerate {
        #[arg(long)]
        dim: usize,
    },
    /// List flags of nontrivial subspaces
    Flags {
        #[arg(long)]
        complete: bool,
    },
    /// Divisor-class computations on the wonderful blow-up
    Chow {
        #[arg(long, value_enum)]
        op: ChowOp,
    },
    /// Separation certificates for every ordered pair of distinct flags
    Fan {
        #[arg(value_enum, default_value = "certify")]
        action: FanAction,
    },
    /// Compare the chart polynomial against the hyperplane complement over GF(q^ext)
    Chart {
        #[arg(value_enum, default_value = "test")]
        action: ChartAction,
    },
    /// Collineation search, or realization of a point permutation read from stdin
    Aut {
        #[arg(value_enum)]
        action: AutAction,
    },
    /// Run every verification suite that fits the budget
    Verify {
        #[arg(long)]
        counting_only: bool,
    },
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "wonderful",
    version,
    about = "Exact checks on subspace lattices over finite fields"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Field order, a prime power
    #[arg(long, global = true, default_value_t = 2)]
    pub q: u64,
    /// Projective dimension
    #[arg(long, global = true, default_value_t = 2)]
    pub n: usize,
    /// Extension degree m for chart tests over GF(q^m)
    #[arg(long, visible_alias = "ext-degree", global = true, default_value_t = 2)]
    pub ext: u32,
    #[arg(long, value_enum, global = true, default_value = "json")]
    pub format: Format,
    /// Node cap for the collineation search
    #[arg(long, global = true, default_value_t = SEARCH_BUDGET)]
    pub budget: u64,
    /// Worker threads, 0 for one per core
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    /// Write the output here instead of standard output
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

/// Validated run parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub q: u64,
    pub n: usize,
    pub ext: u32,
    pub command: Command,
    pub format: Format,
    pub budget: u64,
    #[serde(skip)]
    pub workers: usize,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(q: u64, n: usize, command: Command) -> RunConfig {
        RunConfig {
            q,
            n,
            ext: 2,
            command,
            format: Format::Json,
            budget: SEARCH_BUDGET,
            workers: 0,
            out: None,
        }
    }

    pub fn from_cli(cli: Cli) -> Result<RunConfig, CliError> {
        let g = cli.global;
        let cfg = RunConfig {
            q: g.q,
            n: g.n,
            ext: g.ext,
            command: cli.command,
            format: g.format,
            budget: g.budget,
            workers: g.workers,
            out: g.out,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.q < 2 || gf::prime_power(self.q).is_err() {
            return Err(CliError::Config(format!(
                "q = {} is not a prime power",
                self.q
            )));
        }
        if self.n < 1 {
            return Err(CliError::Config("n must be at least 1".into()));
        }
        if self.ext < 1 {
            return Err(CliError::Config("ext must be at least 1".into()));
        }
        if self.budget == 0 {
            return Err(CliError::Config("budget must be positive".into()));
        }
        Ok(())
    }
}
