use std::fmt::Write as _;
use std::path::Path;

use super::experiment::trace_path;
use crate::error::{Error, Result};
use crate::stats::median;
use crate::trace::ConvergenceTrace;

pub const DEFAULT_GRID_POINTS: usize = 100;

/// Long-format traces plus their per-variant medians on a shared NFC grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceCsv {
    /// `variant,trial,nfc,best_error`
    pub traces: String,
    /// `variant,nfc,median_error`
    pub medians: String,
}

/// All trial traces of one cell, in trial order.
pub fn load_cell_traces(
    dir: &Path,
    variant: &str,
    function: &str,
    dimension: usize,
) -> Result<Vec<(usize, ConvergenceTrace)>> {
    let cell_dir = trace_path(dir, variant, function, dimension, 0)
        .parent()
        .expect("trace files live in a cell directory")
        .to_path_buf();
    let entries = std::fs::read_dir(&cell_dir).map_err(|_| {
        Error::Lookup(format!(
            "no traces for {variant}/{function}/d{dimension} in {}",
            dir.display()
        ))
    })?;
    let mut traces = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(&cell_dir, e))?;
        let name = entry.file_name().to_string_lossy().into_owned();
        let Some(trial) = name
            .strip_prefix("trial_")
            .and_then(|s| s.strip_suffix(".csv"))
            .and_then(|s| s.parse::<usize>().ok())
        else {
            continue;
        };
        let text = std::fs::read_to_string(entry.path()).map_err(|e| Error::io(entry.path(), e))?;
        let trace = ConvergenceTrace::from_csv(&text).map_err(|e| Error::Parse {
            path: entry.path(),
            message: e.to_string(),
        })?;
        traces.push((trial, trace));
    }
    if traces.is_empty() {
        return Err(Error::Lookup(format!(
            "no traces for {variant}/{function}/d{dimension}"
        )));
    }
    traces.sort_by_key(|(t, _)| *t);
    Ok(traces)
}

/// Convergence data for every variant with traces of `(function, dimension)`.
pub fn convergence_from_dir(
    dir: &Path,
    function: &str,
    dimension: usize,
    grid_points: usize,
) -> Result<ConvergenceCsv> {
    let root = dir.join("traces");
    let mut variants: Vec<String> = std::fs::read_dir(&root)
        .map_err(|_| Error::Lookup(format!("{} has no traces directory", dir.display())))?
        .filter_map(|e| e.ok())
        .filter(|e| e.path().is_dir())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .collect();
    variants.sort();
    let mut sets = Vec::new();
    for v in variants {
        if let Ok(traces) = load_cell_traces(dir, &v, function, dimension) {
            sets.push((v, traces));
        }
    }
    if sets.is_empty() {
        return Err(Error::Lookup(format!(
            "no traces for {function} at d{dimension}"
        )));
    }
    emit_convergence_csv(&sets, grid_points)
}

/// `grid_points + 1` evenly spaced NFC values from 0 to the longest trace.
fn nfc_grid(max_nfc: u64, grid_points: usize) -> Vec<u64> {
    let g = grid_points.max(1) as u64;
    let mut grid: Vec<u64> = (0..=g).map(|k| (k * max_nfc + g / 2) / g).collect();
    grid.dedup();
    grid
}

pub fn emit_convergence_csv(
    sets: &[(String, Vec<(usize, ConvergenceTrace)>)],
    grid_points: usize,
) -> Result<ConvergenceCsv> {
    let mut traces = String::from("variant,trial,nfc,best_error\n");
    let mut max_nfc = 0;
    for (variant, runs) in sets {
        for (trial, trace) in runs {
            for p in trace.points() {
                let _ = writeln!(traces, "{variant},{trial},{},{:e}", p.nfc, p.best_error);
                max_nfc = max_nfc.max(p.nfc);
            }
        }
    }
    let grid = nfc_grid(max_nfc, grid_points);
    let mut medians = String::from("variant,nfc,median_error\n");
    for (variant, runs) in sets {
        for &nfc in &grid {
            let values: Vec<f64> = runs.iter().filter_map(|(_, t)| t.value_at(nfc)).collect();
            let m = median(&values)
                .ok_or_else(|| Error::Lookup(format!("variant {variant} has only empty traces")))?;
            let _ = writeln!(medians, "{variant},{nfc},{m:e}");
        }
    }
    Ok(ConvergenceCsv { traces, medians })
}
