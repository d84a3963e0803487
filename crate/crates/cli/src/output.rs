//! Report serialization: `report.json`, `margins.csv`, and the `witnesses/`
//! directory of failing inputs.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};

use crate::runner::{MarginRow, SuiteOutcome};

pub fn margins_csv(rows: &[MarginRow]) -> String {
    let mut out = String::from("statement,n,trial,k,slack\n");
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            row.statement, row.n, row.trial, row.k, row.slack
        )
        .unwrap();
    }
    out
}

pub fn write_outputs(out_dir: &Path, outcome: &SuiteOutcome) -> Result<()> {
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    let report_path = out_dir.join("report.json");
    let json = serde_json::to_string_pretty(&outcome.report)?;
    std::fs::write(&report_path, json + "\n")
        .with_context(|| format!("writing {}", report_path.display()))?;

    let csv_path = out_dir.join("margins.csv");
    std::fs::write(&csv_path, margins_csv(&outcome.margin_rows))
        .with_context(|| format!("writing {}", csv_path.display()))?;

    let witness_dir = out_dir.join("witnesses");
    std::fs::create_dir_all(&witness_dir)
        .with_context(|| format!("creating {}", witness_dir.display()))?;
    for (name, text) in &outcome.witness_files {
        let path = witness_dir.join(name);
        std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}
