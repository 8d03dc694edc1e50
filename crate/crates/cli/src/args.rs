use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand};
use irs_core::{IntegrandSpec, Strategy, SumForm};

use crate::config::{CliConfig, CommandName, Format};

/// Complete and incomplete Riemann–Stieltjes sums on simulated Brownian paths
#[derive(Debug, Parser)]
#[command(name = "irs", version, about)]
pub struct Cli {
    /// TOML file whose keys mirror the long flags; flags override it
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Worker threads for Monte Carlo runs (default: all cores)
    #[arg(long, global = true, env = "IRS_THREADS")]
    pub threads: Option<usize>,

    /// Print the resolved settings to stderr (repeat for more)
    #[arg(short, long, global = true, action = ArgAction::Count)]
    pub verbose: u8,

    /// Print the resolved configuration as TOML and exit
    #[arg(long, global = true)]
    pub print_config: bool,

    /// May be omitted when the config file names a command
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Incomplete sums of one path for every (strategy, r) cell
    Sweep(ExperimentArgs),
    /// Monte Carlo mean absolute error for every (strategy, r) cell
    Mae(MaeArgs),
    /// Number of incomplete sums, C(n, K)·(2^K − 1), exactly
    Count(CountArgs),
    /// Check Stratonovich = Itô + ½ mean-square correction path by path
    IdentityCheck(CheckArgs),
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// Time horizon
    #[arg(long = "T", value_name = "T")]
    pub horizon: Option<f64>,

    /// Number of partition cells
    #[arg(long)]
    pub n: Option<usize>,

    /// Deletion exponents, K = floor(n^r) (r = 0 keeps every term)
    #[arg(long, value_delimiter = ',', value_name = "R,...")]
    pub r_list: Option<Vec<f64>>,

    /// Deletion strategies: begin, random, end
    #[arg(long, value_delimiter = ',', value_name = "NAME,...")]
    pub strategies: Option<Vec<Strategy>>,

    /// Sum form: ito, strat-midpoint, strat-average, mean-square
    #[arg(long)]
    pub form: Option<SumForm>,

    /// identity, sin, constant:<c> or poly:<c0,c1,...>
    #[arg(long)]
    pub integrand: Option<IntegrandSpec>,

    /// Master seed
    #[arg(long, value_parser = clap::value_parser!(u64).range(0..=i64::MAX as u64))]
    pub seed: Option<u64>,

    /// Output file (default: stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct MaeArgs {
    #[command(flatten)]
    pub experiment: ExperimentArgs,

    /// Number of simulated paths N
    #[arg(long)]
    pub iters: Option<usize>,

    /// Reuse one path set across all cells
    #[arg(long, value_name = "BOOL")]
    pub shared_paths: Option<bool>,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long)]
    pub n: Option<usize>,

    /// Number of deleted terms
    #[arg(long = "K", value_name = "K")]
    pub k: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub mae: MaeArgs,

    /// Bound on the mean absolute residual per cell
    /// (default: three times its chi-square scale)
    #[arg(long)]
    pub tol: Option<f64>,
}

impl ExperimentArgs {
    fn config(self) -> CliConfig {
        CliConfig {
            horizon: self.horizon,
            n: self.n,
            r_list: self.r_list,
            strategies: self.strategies,
            form: self.form,
            integrand: self.integrand,
            seed: self.seed,
            out: self.out,
            format: self.format,
            ..Default::default()
        }
    }
}

impl MaeArgs {
    fn config(self) -> CliConfig {
        CliConfig {
            iters: self.iters,
            shared_paths: self.shared_paths,
            ..self.experiment.config()
        }
    }
}

impl Cli {
    /// Settings given on the command line, as a config layer.
    pub fn flags(self) -> CliConfig {
        let (command, layer) = match self.command {
            None => (None, CliConfig::default()),
            Some(Command::Sweep(a)) => (Some(CommandName::Sweep), a.config()),
            Some(Command::Mae(a)) => (Some(CommandName::Mae), a.config()),
            Some(Command::Count(a)) => (
                Some(CommandName::Count),
                CliConfig {
                    n: a.n,
                    k: a.k,
                    ..Default::default()
                },
            ),
            Some(Command::IdentityCheck(a)) => (
                Some(CommandName::IdentityCheck),
                CliConfig {
                    tol: a.tol,
                    ..a.mae.config()
                },
            ),
        };
        CliConfig {
            command,
            threads: self.threads,
            verbosity: (self.verbose > 0).then_some(self.verbose),
            ..layer
        }
    }
}
