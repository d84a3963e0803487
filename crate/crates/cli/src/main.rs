use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use logmajor_cli::config::{parse_list, parse_statements, SuiteConfig};
use logmajor_cli::output::write_outputs;
use logmajor_cli::runner::run_suite;
use logmajor_cli::selftest::selftest;
use logmajor_core::checks::{catalog, run_statement};
use logmajor_core::witness::Witness;
use logmajor_core::StatementId;

/// Randomized verifier for a suite of singular-value, log-submajorization,
/// and determinant inequalities on n x n complex matrices.
#[derive(Parser)]
#[command(name = "logmajor", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the falsification suite over a statement/dimension/parameter grid.
    Run {
        /// Flat key=value config file; flags below override its values.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Comma-separated statement ids (default: all).
        #[arg(long)]
        statements: Option<String>,
        /// Comma-separated dimensions (default: 2,3,4,8,16).
        #[arg(long)]
        dims: Option<String>,
        /// Trials per grid cell (default: 200).
        #[arg(long)]
        trials: Option<u64>,
        /// Master seed (default: $LOGMAJOR_SEED, then 42).
        #[arg(long)]
        seed: Option<u64>,
        /// Slack tolerance in log units (default: 1e-8).
        #[arg(long)]
        tolerance: Option<f64>,
        /// Also run out-of-range parameter cells (advisory only).
        #[arg(long)]
        exploratory: bool,
        /// Output directory (default: out/).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-evaluate one statement on a saved witness file.
    Replay {
        /// Statement id, e.g. THEOREM_3_3.
        statement: String,
        /// Witness file path.
        witness_file: PathBuf,
    },
    /// Oracle-equivalence and exact-identity smoke gate.
    Selftest {
        /// Master seed (default: $LOGMAJOR_SEED, then 42).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print the machine-readable statement catalog as JSON.
    Catalog,
}

fn main() -> ExitCode {
    match dispatch() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch() -> anyhow::Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            statements,
            dims,
            trials,
            seed,
            tolerance,
            exploratory,
            out,
        } => {
            let mut suite = SuiteConfig::default();
            if let Some(path) = config {
                suite.apply_file(&path)?;
            }
            if let Some(s) = statements {
                suite.statements = parse_statements(&s)?;
            }
            if let Some(d) = dims {
                suite.dims = parse_list(&d)?;
            }
            if let Some(t) = trials {
                suite.trials = t;
            }
            if let Some(s) = seed {
                suite.master_seed = s;
            }
            if let Some(t) = tolerance {
                suite.tolerance = t;
            }
            if exploratory {
                suite.exploratory = true;
            }
            if let Some(o) = out {
                suite.out_dir = o;
            }
            suite.validate()?;

            let outcome = run_suite(&suite);
            write_outputs(&suite.out_dir, &outcome)?;
            let report = &outcome.report;
            println!(
                "{} cells, {} trials, {} failures ({} scored); report in {}",
                report.cells.len(),
                report.total_trials,
                report.total_failures,
                report.scored_failures,
                suite.out_dir.display()
            );
            for summary in &report.statements {
                println!(
                    "  {:<22} cells {:>3}  trials {:>6}  failures {:>5}  worst slack {}",
                    summary.statement.to_string(),
                    summary.cells,
                    summary.trials,
                    summary.failures,
                    summary.worst_slack
                );
            }
            Ok(if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Replay {
            statement,
            witness_file,
        } => {
            let id: StatementId = statement.parse()?;
            let text = std::fs::read_to_string(&witness_file)
                .map_err(|e| anyhow::anyhow!("reading {}: {e}", witness_file.display()))?;
            let witness = Witness::from_text(&text)?;
            if witness.statement != id {
                anyhow::bail!(
                    "witness file is for {}, not {}",
                    witness.statement,
                    id
                );
            }
            let result = run_statement(id, &witness.params, &witness.matrices, true)?;
            println!("statement {id}");
            for m in &result.margins {
                println!(
                    "  k={:<3} t={:<8} lhs={:<24} rhs={:<24} slack={}",
                    m.k, m.t, m.lhs_log, m.rhs_log, m.slack
                );
            }
            println!(
                "{}: worst slack {}",
                if result.pass { "PASS" } else { "FAIL" },
                result.worst_slack
            );
            Ok(if result.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Selftest { seed } => {
            let master = seed
                .or_else(|| std::env::var("LOGMAJOR_SEED").ok().and_then(|s| s.parse().ok()))
                .unwrap_or(42);
            Ok(if selftest(master) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Catalog => {
            println!("{}", serde_json::to_string_pretty(&catalog())?);
            Ok(ExitCode::SUCCESS)
        }
    }
}
