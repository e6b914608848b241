//! Batch experiments: seeded cells, on-disk artifacts, verdict matrices and
//! convergence curves.

mod config;
mod curves;
mod experiment;
mod io;

pub use config::{cell_seed, ExperimentConfig};
pub use curves::{
    convergence_from_dir, emit_convergence_csv, load_cell_traces, ConvergenceCsv,
    DEFAULT_GRID_POINTS,
};
pub use experiment::{
    build_verdicts, compare_dir, load_summaries, run_experiment, summaries_to_csv, trace_path,
    CellSummary, ExperimentReport, TallyRow, VerdictEntry, VerdictMatrix,
};
pub use io::write_atomic;
