//! Experiment orchestration: configuration, seeded runs of every rule,
//! CSV output, summary tables and the statistical theorem checks.

mod config;
mod output;
mod run;
mod theorems;

use std::path::{Path, PathBuf};

pub use config::{ExperimentConfig, ExperimentKind, Source};
pub use output::{aggregates_csv, committee_label, parse_records_csv, records_csv, timing_csv, RECORD_HEADER};
pub use run::{
    aggregate, load_instances, order_seed, polarized_corpus, run_experiment, run_instance,
    AggregateRow, ExperimentOutput, Instance, RunRecord, BASELINE,
};
pub use theorems::{
    nash_bound, single_approval_instance, three_sigma, verify_thm_mes, verify_thm_nash,
    NashInstanceResult, ThmMesReport, ThmNashReport, WinnerFrequency,
};

use crate::error::Result;

/// Paths of the summary and timing files written next to `output`.
pub fn sidecar_paths(output: &Path) -> (PathBuf, PathBuf) {
    let stem = output.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let dir = output.parent().unwrap_or(Path::new(""));
    (dir.join(format!("{stem}.summary.csv")), dir.join(format!("{stem}.timing.csv")))
}

/// Writes the record CSV to `output` and the summary and timing tables
/// beside it.
pub fn write_outputs(out: &ExperimentOutput, output: &Path) -> Result<()> {
    let (summary, timing) = sidecar_paths(output);
    std::fs::write(output, records_csv(&out.records)?)?;
    std::fs::write(summary, aggregates_csv(&out.aggregates)?)?;
    std::fs::write(timing, timing_csv(&out.records)?)?;
    Ok(())
}
