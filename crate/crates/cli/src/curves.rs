//! Accuracy and tree-size learning curves, one CSV per run.

use std::path::{Path, PathBuf};

use crate::error::{CliError, CliResult};
use crate::runner::RunRecord;

pub const CURVE_HEADER: &str = "instances_seen,accuracy,node_count";

/// `{stream}_{algorithm}_tau{τ}_seed{seed}_rep{repetition}.csv`
pub fn curve_file_name(record: &RunRecord) -> String {
    format!(
        "{}_{}_tau{}_seed{}_rep{}.csv",
        record.stream, record.algorithm, record.tie_threshold, record.seed, record.repetition
    )
}

pub fn render_curve(record: &RunRecord) -> String {
    let mut text = String::from(CURVE_HEADER);
    text.push('\n');
    for s in &record.snapshots {
        text.push_str(&format!(
            "{},{},{}\n",
            s.instances_seen, s.accuracy, s.node_count
        ));
    }
    text
}

/// Writes one curve file per record into `dir` and returns their paths.
pub fn export_curves(records: &[RunRecord], dir: &Path) -> CliResult<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    records
        .iter()
        .map(|r| {
            let path = dir.join(curve_file_name(r));
            std::fs::write(&path, render_curve(r)).map_err(|e| CliError::io(&path, e))?;
            Ok(path)
        })
        .collect()
}
