use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{cell_seed, ExperimentConfig};
use super::io::write_atomic;
use crate::algorithms::{run, Termination, Variant};
use crate::benchmarks::{make_problem, BenchmarkSpec};
use crate::error::{Error, Result};
use crate::stats::{summarize, tally_verdicts, wilcoxon_rank_sum, ComparisonVerdict, Sign, Tally};

pub const SUMMARY_JSON: &str = "summary.json";
pub const SUMMARY_CSV: &str = "summary.csv";
pub const VERDICTS_CSV: &str = "verdicts.csv";
pub const TALLY_CSV: &str = "tally.csv";

/// Per-run trace location inside an output directory.
pub fn trace_path(
    dir: &Path,
    variant: &str,
    function: &str,
    dimension: usize,
    trial: usize,
) -> PathBuf {
    dir.join("traces")
        .join(variant)
        .join(function)
        .join(format!("d{dimension}"))
        .join(format!("trial_{trial:03}.csv"))
}

/// Aggregate of one `(variant, function, dimension)` cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub variant: String,
    pub function: String,
    pub dimension: usize,
    pub trials: usize,
    pub mean_error: f64,
    pub std_error: f64,
    pub formatted: String,
    /// runs that stopped on the error target
    pub successes: usize,
    pub seeds: Vec<u64>,
    pub final_errors: Vec<f64>,
    pub nfc_used: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct SummaryDocument {
    config: ExperimentConfig,
    cells: Vec<CellSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictEntry {
    pub function: String,
    pub dimension: usize,
    pub competitor: String,
    pub verdict: ComparisonVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TallyRow {
    pub competitor: String,
    pub dimension: usize,
    pub tally: Tally,
}

/// Reference-versus-competitor signs for every shared `(function, dimension)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictMatrix {
    pub reference: String,
    pub alpha: f64,
    pub entries: Vec<VerdictEntry>,
}

impl VerdictMatrix {
    /// Table-II style counts per competitor and dimension.
    pub fn tallies(&self) -> Vec<TallyRow> {
        let mut groups: BTreeMap<(String, usize), Vec<&ComparisonVerdict>> = BTreeMap::new();
        for e in &self.entries {
            groups
                .entry((e.competitor.clone(), e.dimension))
                .or_default()
                .push(&e.verdict);
        }
        groups
            .into_iter()
            .map(|((competitor, dimension), v)| TallyRow {
                competitor,
                dimension,
                tally: tally_verdicts(v),
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("reference,competitor,function,dimension,sign,p_value\n");
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{:e}",
                self.reference,
                e.competitor,
                e.function,
                e.dimension,
                e.verdict.sign,
                e.verdict.p_value
            );
        }
        out
    }

    pub fn tally_csv(&self) -> String {
        let mut out = String::from("reference,competitor,dimension,plus,equal,minus\n");
        for row in self.tallies() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                self.reference,
                row.competitor,
                row.dimension,
                row.tally.plus,
                row.tally.equal,
                row.tally.minus
            );
        }
        out
    }

    pub fn sign(&self, competitor: &str, function: &str, dimension: usize) -> Option<Sign> {
        self.entries
            .iter()
            .find(|e| {
                e.competitor == competitor && e.function == function && e.dimension == dimension
            })
            .map(|e| e.verdict.sign)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub summaries: Vec<CellSummary>,
    pub verdicts: VerdictMatrix,
}

pub fn summaries_to_csv(cells: &[CellSummary]) -> String {
    let mut out = String::from(
        "variant,function,dimension,trials,mean_error,std_error,formatted,successes\n",
    );
    for c in cells {
        let _ = writeln!(
            out,
            "{},{},{},{},{:e},{:e},{},{}",
            c.variant,
            c.function,
            c.dimension,
            c.trials,
            c.mean_error,
            c.std_error,
            c.formatted,
            c.successes
        );
    }
    out
}

/// Verdicts of `reference` against every other variant present in `cells`.
pub fn build_verdicts(cells: &[CellSummary], reference: &str, alpha: f64) -> Result<VerdictMatrix> {
    let index: BTreeMap<(&str, &str, usize), &CellSummary> = cells
        .iter()
        .map(|c| ((c.variant.as_str(), c.function.as_str(), c.dimension), c))
        .collect();
    if !cells.iter().any(|c| c.variant == reference) {
        return Err(Error::Lookup(format!(
            "no results for reference variant {reference}"
        )));
    }
    let mut entries = Vec::new();
    for c in cells.iter().filter(|c| c.variant != reference) {
        let Some(r) = index.get(&(reference, c.function.as_str(), c.dimension)) else {
            continue;
        };
        let verdict = if r.final_errors.len() >= 2 && c.final_errors.len() >= 2 {
            wilcoxon_rank_sum(&r.final_errors, &c.final_errors, alpha)?
        } else {
            // too few trials for a test
            ComparisonVerdict {
                sign: Sign::Equal,
                p_value: 1.0,
            }
        };
        entries.push(VerdictEntry {
            function: c.function.clone(),
            dimension: c.dimension,
            competitor: c.variant.clone(),
            verdict,
        });
    }
    entries.sort_by(|a, b| {
        (a.competitor.as_str(), a.dimension, a.function.as_str()).cmp(&(
            b.competitor.as_str(),
            b.dimension,
            b.function.as_str(),
        ))
    });
    Ok(VerdictMatrix {
        reference: reference.to_string(),
        alpha,
        entries,
    })
}

struct RunRecord {
    variant: Variant,
    function: String,
    dimension: usize,
    trial: usize,
    seed: u64,
    final_error: f64,
    nfc_used: u64,
    reached: bool,
}

/// Runs every cell of `config` and writes traces, summaries and verdicts
/// under `config.output_dir`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let variants = config.parsed_variants()?;
    let functions = config.parsed_functions()?;
    let reference = config.reference_variant()?;
    let dir = &config.output_dir;

    let mut problems = BTreeMap::new();
    for f in &functions {
        for &d in &config.dimensions {
            let spec = BenchmarkSpec::new(f.id(), d, config.shift_seed);
            problems.insert((f.id(), d), make_problem(&spec)?);
        }
    }
    let mut cells = Vec::new();
    for &v in &variants {
        for f in &functions {
            for &d in &config.dimensions {
                for t in 0..config.trials {
                    cells.push((v, f.id(), d, t));
                }
            }
        }
    }

    let execute = || {
        cells
            .par_iter()
            .map(|&(variant, function, dimension, trial)| {
                let problem = &problems[&(function, dimension)];
                let mut strategy = variant.config(dimension);
                strategy.nfc_max = config.nfc_per_dim * dimension as u64;
                let seed = cell_seed(config.base_seed, variant.name(), function, dimension, trial);
                let result = run(problem, &strategy, seed)?;
                let path = trace_path(dir, variant.name(), function, dimension, trial);
                write_atomic(&path, result.trace.to_csv().as_bytes())?;
                Ok(RunRecord {
                    variant,
                    function: function.to_string(),
                    dimension,
                    trial,
                    seed,
                    final_error: result.final_error,
                    nfc_used: result.nfc_used,
                    reached: result.terminated_by == Termination::ErrorReached,
                })
            })
            .collect::<Result<Vec<_>>>()
    };
    let mut records = match config.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("worker pool: {e}")))?
            .install(execute)?,
        None => execute()?,
    };
    records.sort_by(|a, b| {
        (a.variant.name(), a.function.as_str(), a.dimension, a.trial).cmp(&(
            b.variant.name(),
            b.function.as_str(),
            b.dimension,
            b.trial,
        ))
    });

    let mut summaries = Vec::new();
    for group in records.chunk_by(|a, b| {
        a.variant == b.variant && a.function == b.function && a.dimension == b.dimension
    }) {
        let final_errors: Vec<f64> = group.iter().map(|r| r.final_error).collect();
        let s = summarize(&final_errors)?;
        summaries.push(CellSummary {
            variant: group[0].variant.name().to_string(),
            function: group[0].function.clone(),
            dimension: group[0].dimension,
            trials: group.len(),
            mean_error: s.mean_error,
            std_error: s.std_error,
            formatted: s.to_string(),
            successes: group.iter().filter(|r| r.reached).count(),
            seeds: group.iter().map(|r| r.seed).collect(),
            final_errors,
            nfc_used: group.iter().map(|r| r.nfc_used).collect(),
        });
    }

    let doc = SummaryDocument {
        config: config.clone(),
        cells: summaries,
    };
    let json = serde_json::to_string_pretty(&doc).expect("summary serializes");
    write_atomic(&dir.join(SUMMARY_JSON), json.as_bytes())?;
    write_atomic(
        &dir.join(SUMMARY_CSV),
        summaries_to_csv(&doc.cells).as_bytes(),
    )?;

    let verdicts = build_verdicts(&doc.cells, reference.name(), config.alpha)?;
    write_atomic(&dir.join(VERDICTS_CSV), verdicts.to_csv().as_bytes())?;
    write_atomic(&dir.join(TALLY_CSV), verdicts.tally_csv().as_bytes())?;

    Ok(ExperimentReport {
        summaries: doc.cells,
        verdicts,
    })
}

/// Cell summaries stored in an experiment directory.
pub fn load_summaries(dir: &Path) -> Result<Vec<CellSummary>> {
    let path = dir.join(SUMMARY_JSON);
    let text = std::fs::read_to_string(&path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::Lookup(format!("{} not found", path.display())),
        _ => Error::io(&path, e),
    })?;
    let doc: SummaryDocument = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.clone(),
        message: e.to_string(),
    })?;
    Ok(doc.cells)
}

/// Recomputes the verdict matrix of a finished experiment.
pub fn compare_dir(dir: &Path, alpha: f64, reference: &str) -> Result<VerdictMatrix> {
    let reference: Variant = reference.parse()?;
    build_verdicts(&load_summaries(dir)?, reference.name(), alpha)
}
