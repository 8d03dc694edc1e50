//! On-disk configuration. Keys mirror the long flag names, so a config file
//! and a command line describe the same run.

use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use irs_core::{ExperimentConfig, IntegrandSpec, Strategy, SumForm};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    Sweep,
    Mae,
    Count,
    IdentityCheck,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
}

/// Every setting a command can take. `None` means "not given here".
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct CliConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<CommandName>,
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_list: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strategies: Option<Vec<Strategy>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub form: Option<SumForm>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub integrand: Option<IntegrandSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iters: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shared_paths: Option<bool>,
    #[serde(rename = "K", skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verbosity: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

impl CliConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(CliError::io(format!("reading {}", path.display())))?;
        Self::from_toml(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    pub fn from_toml(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config values are always representable in TOML")
    }

    /// Field-wise overlay: values set in `over` win.
    pub fn overlay(self, over: CliConfig) -> CliConfig {
        CliConfig {
            command: over.command.or(self.command),
            horizon: over.horizon.or(self.horizon),
            n: over.n.or(self.n),
            r_list: over.r_list.or(self.r_list),
            strategies: over.strategies.or(self.strategies),
            form: over.form.or(self.form),
            integrand: over.integrand.or(self.integrand),
            seed: over.seed.or(self.seed),
            iters: over.iters.or(self.iters),
            shared_paths: over.shared_paths.or(self.shared_paths),
            k: over.k.or(self.k),
            tol: over.tol.or(self.tol),
            out: over.out.or(self.out),
            format: over.format.or(self.format),
            verbosity: over.verbosity.or(self.verbosity),
            threads: over.threads.or(self.threads),
        }
    }

    /// The experiment this config describes, library defaults filling gaps.
    pub fn experiment(&self) -> Result<ExperimentConfig, CliError> {
        let d = ExperimentConfig::default();
        let config = ExperimentConfig {
            horizon: self.horizon.unwrap_or(d.horizon),
            n: self.n.unwrap_or(d.n),
            r_values: self.r_list.clone().unwrap_or(d.r_values),
            strategies: self.strategies.clone().unwrap_or(d.strategies),
            iterations: self.iters.unwrap_or(d.iterations),
            form: self.form.unwrap_or(d.form),
            integrand: self.integrand.clone().unwrap_or(d.integrand),
            master_seed: self.seed.unwrap_or(d.master_seed),
            shared_paths: self.shared_paths.unwrap_or(d.shared_paths),
        };
        config.validate()?;
        Ok(config)
    }
}
