//! Shared fixtures for the criterion benchmarks.

use oemde::{make_problem, BenchmarkSpec, Problem};

pub fn problem(function: &str, dimension: usize) -> Problem {
    make_problem(&BenchmarkSpec::new(function, dimension, 1)).expect("bundled function")
}
