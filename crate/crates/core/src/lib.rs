//! Micro-population differential evolution with ensemble mutation and
//! opposition-based learning, a shifted benchmark suite, rank-sum
//! comparisons and a seeded experiment harness.
//!
//! ```
//! use oemde::{make_problem, run, BenchmarkSpec, Variant};
//!
//! let problem = make_problem(&BenchmarkSpec::new("sphere", 5, 1)).unwrap();
//! let config = Variant::Oemde.config(5);
//! let result = run(&problem, &config, 42).unwrap();
//! assert!(result.nfc_used <= config.nfc_max + 2 * config.np as u64);
//! ```

pub mod algorithms;
pub mod benchmarks;
pub mod error;
pub mod harness;
pub mod operators;
pub mod opposition;
pub mod population;
pub mod problem;
pub mod rng;
pub mod stats;
pub mod trace;

pub use algorithms::{
    expand_preset, run, Engine, RunResult, ScaleFactorMode, StrategyConfig, Termination, Variant,
};
pub use benchmarks::{make_problem, BenchmarkFunction, BenchmarkSpec, FunctionClass};
pub use error::{Error, Result};
pub use operators::{MutationScheme, ScaleFactorVector};
pub use opposition::OppositionMode;
pub use population::{init_population, Individual, Population};
pub use problem::{evaluate, BudgetCounter, Problem, SearchBounds};
pub use rng::RngStream;
pub use stats::{
    summarize, tally_verdicts, wilcoxon_rank_sum, ComparisonVerdict, RunSummary, Sign, Tally,
};
pub use trace::{ConvergenceTrace, TracePoint};
