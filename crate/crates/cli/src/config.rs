//! Suite configuration: defaults, flat key-value config files, and CLI
//! overrides (flags win over file values, which win over defaults).

use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use logmajor_core::StatementId;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TRIALS: u64 = 200;
pub const DEFAULT_DIMS: &[usize] = &[2, 3, 4, 8, 16];

/// `r` grid for the power bound statements.
pub const R_GRID_POWER: &[f64] = &[1.0, 1.25, 1.5, 1.75, 2.0];
/// `r` grid for the product/Hoelder statements.
pub const R_GRID_PRODUCT: &[f64] = &[1.0, 1.5, 2.0, 3.0];
/// Factor counts for the Hoelder statements.
pub const M_GRID: &[usize] = &[2, 3, 4];
/// Out-of-range `r` values explored (advisory only) with `--exploratory`.
pub const R_GRID_EXPLORATORY: &[f64] = &[2.5, 3.0];

#[derive(Clone, Debug, Serialize)]
pub struct SuiteConfig {
    /// Statements to run; empty means all (including the negative control).
    pub statements: Vec<StatementId>,
    pub dims: Vec<usize>,
    pub trials: u64,
    pub master_seed: u64,
    /// Slack tolerance in log units (pass ⇔ worst slack ≥ −tolerance).
    pub tolerance: f64,
    pub exploratory: bool,
    pub out_dir: PathBuf,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            statements: Vec::new(),
            dims: DEFAULT_DIMS.to_vec(),
            trials: DEFAULT_TRIALS,
            master_seed: default_seed(),
            tolerance: logmajor_core::SLACK_TOL,
            exploratory: false,
            out_dir: PathBuf::from("out"),
        }
    }
}

fn default_seed() -> u64 {
    std::env::var("LOGMAJOR_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            bail!("trials must be at least 1");
        }
        if self.dims.is_empty() || self.dims.iter().any(|&n| n == 0) {
            bail!("dims must be a nonempty list of integers >= 1");
        }
        if !(self.tolerance > 0.0) {
            bail!("tolerance must be positive");
        }
        Ok(())
    }

    /// Statements selected by this config, in catalog order.
    pub fn selected_statements(&self) -> Vec<StatementId> {
        if self.statements.is_empty() {
            let mut all: Vec<StatementId> = StatementId::all().to_vec();
            all.push(StatementId::NegativeControl33);
            all
        } else {
            self.statements.clone()
        }
    }

    /// Apply a flat `key = value` config file. Unknown keys are errors.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config file {}", path.display()))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .with_context(|| format!("{}:{}: expected `key = value`", path.display(), lineno + 1))?;
            let (key, value) = (key.trim(), value.trim());
            let ctx = || format!("{}:{}: bad value for `{key}`", path.display(), lineno + 1);
            match key {
                "statements" => self.statements = parse_statements(value).with_context(ctx)?,
                "dims" => self.dims = parse_list(value).with_context(ctx)?,
                "trials" => self.trials = value.parse().with_context(ctx)?,
                "seed" => self.master_seed = value.parse().with_context(ctx)?,
                "tolerance" => self.tolerance = value.parse().with_context(ctx)?,
                "exploratory" => self.exploratory = value.parse().with_context(ctx)?,
                "out" => self.out_dir = PathBuf::from(value),
                other => bail!("{}:{}: unknown config key `{other}`", path.display(), lineno + 1),
            }
        }
        Ok(())
    }
}

pub fn parse_statements(value: &str) -> Result<Vec<StatementId>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| StatementId::from_str(s).map_err(|e| anyhow::anyhow!("{e}")))
        .collect()
}

pub fn parse_list<T: FromStr>(value: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|e| anyhow::anyhow!("`{s}`: {e}")))
        .collect()
}
