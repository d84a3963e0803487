//! Cell construction and suite execution. A *cell* is one (statement,
//! dimension, grid parameters) combination run for a fixed number of trials;
//! cells execute independently (rayon) and the report is assembled in a
//! canonical order so output is schedule-independent.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use logmajor_core::checks::{run_statement, StatementParams};
use logmajor_core::matrix::ComplexMatrix;
use logmajor_core::mu::ext_real;
use logmajor_core::sampler::sample_inputs;
use logmajor_core::witness::Witness;
use logmajor_core::StatementId;

use crate::config::{
    SuiteConfig, M_GRID, R_GRID_EXPLORATORY, R_GRID_POWER, R_GRID_PRODUCT,
};
use crate::shrink::shrink;

/// Failures retained in full (with witnesses) per cell; the counts always
/// cover every trial.
const MAX_RECORDED_FAILURES: usize = 3;

#[derive(Clone, Debug, Serialize)]
pub struct CellSpec {
    pub index: u64,
    pub statement: StatementId,
    pub n: usize,
    pub grid: StatementParams,
    pub trials: u64,
    /// Advisory cell: never affects the exit status.
    pub exploratory: bool,
    /// Expected-to-fail sanity control: never affects the exit status.
    pub control: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FailureRecord {
    pub trial: u64,
    #[serde(with = "ext_real")]
    pub worst_slack: f64,
    pub params: StatementParams,
    pub witness: Vec<ComplexMatrix>,
    pub shrunk_witness: Vec<ComplexMatrix>,
    #[serde(with = "ext_real")]
    pub shrunk_worst_slack: f64,
    pub witness_file: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CellReport {
    pub statement: StatementId,
    pub n: usize,
    pub grid: StatementParams,
    pub trials: u64,
    pub passes: u64,
    pub failures: u64,
    #[serde(with = "ext_real")]
    pub worst_slack: f64,
    pub exploratory: bool,
    pub control: bool,
    pub recorded_failures: Vec<FailureRecord>,
}

/// One `margins.csv` row: the worst margin of one trial.
#[derive(Clone, Debug)]
pub struct MarginRow {
    pub statement: StatementId,
    pub n: usize,
    pub trial: u64,
    pub k: usize,
    pub slack: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct StatementSummary {
    pub statement: StatementId,
    pub cells: u64,
    pub trials: u64,
    pub failures: u64,
    #[serde(with = "ext_real")]
    pub worst_slack: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub version: String,
    pub config: SuiteConfig,
    pub cells: Vec<CellReport>,
    pub statements: Vec<StatementSummary>,
    pub total_trials: u64,
    pub total_failures: u64,
    /// Failures in scoring cells only (exploratory and control excluded).
    pub scored_failures: u64,
    pub pass: bool,
    /// Timing block, excluded from determinism comparisons.
    pub timing: Timing,
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub wall_clock_seconds: f64,
}

/// Expand the configured statements into the default parameter grid.
pub fn build_cells(config: &SuiteConfig) -> Vec<CellSpec> {
    let mut dims = vec![1usize]; // scalar smoke cell
    for &n in &config.dims {
        if !dims.contains(&n) {
            dims.push(n);
        }
    }
    let mut cells = Vec::new();
    let mut push = |statement: StatementId, n: usize, grid: StatementParams, exploratory: bool| {
        let index = cells.len() as u64;
        cells.push(CellSpec {
            index,
            statement,
            n,
            grid,
            trials: config.trials,
            exploratory,
            control: statement.is_control(),
        });
    };
    for id in config.selected_statements() {
        for &n in &dims {
            match id {
                StatementId::Theorem33 | StatementId::Power13 => {
                    for &r in R_GRID_POWER {
                        push(id, n, StatementParams { r: Some(r), ..Default::default() }, false);
                    }
                    if config.exploratory && id == StatementId::Theorem33 {
                        for &r in R_GRID_EXPLORATORY {
                            push(id, n, StatementParams { r: Some(r), ..Default::default() }, true);
                        }
                    }
                }
                StatementId::NegativeControl33 => {
                    push(id, n, StatementParams { r: Some(1.5), ..Default::default() }, false);
                }
                StatementId::Lemma43 | StatementId::Lemma45 => {
                    for &r in R_GRID_PRODUCT {
                        push(id, n, StatementParams { r: Some(r), ..Default::default() }, false);
                    }
                }
                StatementId::Theorem46 | StatementId::Remark48 | StatementId::Holder14 => {
                    for &m in M_GRID {
                        for &r in R_GRID_PRODUCT {
                            push(
                                id,
                                n,
                                StatementParams { r: Some(r), m: Some(m), ..Default::default() },
                                false,
                            );
                        }
                    }
                }
                StatementId::Corollary47 => {
                    for &m in M_GRID {
                        push(id, n, StatementParams { m: Some(m), ..Default::default() }, false);
                    }
                }
                _ => push(id, n, StatementParams::default(), false),
            }
        }
    }
    cells
}

pub struct CellOutcome {
    pub report: CellReport,
    pub margin_rows: Vec<MarginRow>,
    /// (file name, witness text) pairs for the recorded failures.
    pub witness_files: Vec<(String, String)>,
}

pub fn run_cell(spec: &CellSpec, config: &SuiteConfig) -> CellOutcome {
    let mut passes = 0u64;
    let mut failures = 0u64;
    let mut worst = f64::INFINITY;
    let mut recorded = Vec::new();
    let mut margin_rows = Vec::new();
    let mut witness_files = Vec::new();
    for trial in 0..spec.trials {
        let trial_key = spec.index << 32 | trial;
        let (params, witness) =
            match sample_inputs(spec.statement, spec.n, config.master_seed, trial_key, &spec.grid) {
                Ok(v) => v,
                Err(e) => panic!("sampling failed for {}: {e}", spec.statement),
            };
        let result = run_statement(spec.statement, &params, &witness, spec.exploratory)
            .unwrap_or_else(|e| panic!("{} evaluation failed: {e}", spec.statement));
        let slack = result.worst_slack;
        worst = worst.min(slack);
        let pass = slack >= -config.tolerance;
        let worst_margin = result
            .margins
            .iter()
            .min_by(|a, b| a.slack.total_cmp(&b.slack));
        margin_rows.push(MarginRow {
            statement: spec.statement,
            n: spec.n,
            trial,
            k: worst_margin.map_or(0, |m| m.k),
            slack,
        });
        if pass {
            passes += 1;
            continue;
        }
        failures += 1;
        if recorded.len() < MAX_RECORDED_FAILURES {
            let shrunk = shrink(
                spec.statement,
                &params,
                &witness,
                config.tolerance,
                spec.exploratory,
            );
            let shrunk_worst = run_statement(spec.statement, &params, &shrunk, spec.exploratory)
                .map(|r| r.worst_slack)
                .unwrap_or(f64::NAN);
            let file_name = format!(
                "{}_cell{}_n{}_trial{}.txt",
                spec.statement, spec.index, spec.n, trial
            );
            let witness_record = Witness {
                statement: spec.statement,
                params: params.clone(),
                matrices: shrunk.clone(),
            };
            witness_files.push((file_name.clone(), witness_record.to_text()));
            recorded.push(FailureRecord {
                trial,
                worst_slack: slack,
                params,
                witness,
                shrunk_witness: shrunk,
                shrunk_worst_slack: shrunk_worst,
                witness_file: file_name,
            });
        }
    }
    CellOutcome {
        report: CellReport {
            statement: spec.statement,
            n: spec.n,
            grid: spec.grid.clone(),
            trials: spec.trials,
            passes,
            failures,
            worst_slack: worst,
            exploratory: spec.exploratory,
            control: spec.control,
            recorded_failures: recorded,
        },
        margin_rows,
        witness_files,
    }
}

pub struct SuiteOutcome {
    pub report: SuiteReport,
    pub margin_rows: Vec<MarginRow>,
    pub witness_files: Vec<(String, String)>,
}

pub fn run_suite(config: &SuiteConfig) -> SuiteOutcome {
    let start = std::time::Instant::now();
    let cells = build_cells(config);
    let outcomes: Vec<CellOutcome> = cells
        .par_iter()
        .map(|spec| run_cell(spec, config))
        .collect();

    let mut by_statement: BTreeMap<String, StatementSummary> = BTreeMap::new();
    let mut total_trials = 0;
    let mut total_failures = 0;
    let mut scored_failures = 0;
    for outcome in &outcomes {
        let r = &outcome.report;
        total_trials += r.trials;
        total_failures += r.failures;
        if !r.exploratory && !r.control {
            scored_failures += r.failures;
        }
        let entry = by_statement
            .entry(r.statement.to_string())
            .or_insert(StatementSummary {
                statement: r.statement,
                cells: 0,
                trials: 0,
                failures: 0,
                worst_slack: f64::INFINITY,
            });
        entry.cells += 1;
        entry.trials += r.trials;
        entry.failures += r.failures;
        entry.worst_slack = entry.worst_slack.min(r.worst_slack);
    }

    let mut margin_rows = Vec::new();
    let mut witness_files = Vec::new();
    let mut cell_reports = Vec::new();
    for outcome in outcomes {
        cell_reports.push(outcome.report);
        margin_rows.extend(outcome.margin_rows);
        witness_files.extend(outcome.witness_files);
    }

    let report = SuiteReport {
        version: format!("logmajor {}", env!("CARGO_PKG_VERSION")),
        config: config.clone(),
        cells: cell_reports,
        statements: by_statement.into_values().collect(),
        total_trials,
        total_failures,
        scored_failures,
        pass: scored_failures == 0,
        timing: Timing {
            wall_clock_seconds: start.elapsed().as_secs_f64(),
        },
    };
    SuiteOutcome {
        report,
        margin_rows,
        witness_files,
    }
}
