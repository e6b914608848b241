//! Shifted benchmark functions grouped by landscape class.
//!
//! Every base function has its global minimum 0 at the origin. A problem
//! evaluates the base function at `x - shift`, with the shift drawn from
//! the central 80% of `[-5, 5]^D`, so the value-to-reach is always 0.

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{Problem, SearchBounds};
use crate::rng::RngStream;

pub const LOWER_BOUND: f64 = -5.0;
pub const UPPER_BOUND: f64 = 5.0;
/// Fraction of the box the shift vector is drawn from.
pub const SHIFT_FRACTION: f64 = 0.8;
pub const ELLIPSOID_CONDITION: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FunctionClass {
    Separable,
    LowModerateConditioning,
    HighConditioningUnimodal,
    MultimodalAdequateStructure,
    MultimodalWeakStructure,
}

impl FunctionClass {
    pub fn label(self) -> &'static str {
        match self {
            FunctionClass::Separable => "separable",
            FunctionClass::LowModerateConditioning => "low-or-moderate conditioning",
            FunctionClass::HighConditioningUnimodal => "high conditioning, unimodal",
            FunctionClass::MultimodalAdequateStructure => "multimodal, adequate global structure",
            FunctionClass::MultimodalWeakStructure => "multimodal, weak global structure",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BenchmarkFunction {
    Sphere,
    Rastrigin,
    Rosenbrock,
    Ellipsoid,
    DifferentPowers,
    Griewank,
    Ackley,
    Schwefel12,
}

impl BenchmarkFunction {
    pub const ALL: [BenchmarkFunction; 8] = [
        BenchmarkFunction::Sphere,
        BenchmarkFunction::Rastrigin,
        BenchmarkFunction::Rosenbrock,
        BenchmarkFunction::Ellipsoid,
        BenchmarkFunction::DifferentPowers,
        BenchmarkFunction::Griewank,
        BenchmarkFunction::Ackley,
        BenchmarkFunction::Schwefel12,
    ];

    pub fn id(self) -> &'static str {
        match self {
            BenchmarkFunction::Sphere => "sphere",
            BenchmarkFunction::Rastrigin => "rastrigin",
            BenchmarkFunction::Rosenbrock => "rosenbrock",
            BenchmarkFunction::Ellipsoid => "ellipsoid",
            BenchmarkFunction::DifferentPowers => "different-powers",
            BenchmarkFunction::Griewank => "griewank",
            BenchmarkFunction::Ackley => "ackley",
            BenchmarkFunction::Schwefel12 => "schwefel-1.2",
        }
    }

    pub fn class(self) -> FunctionClass {
        match self {
            BenchmarkFunction::Sphere | BenchmarkFunction::Rastrigin => FunctionClass::Separable,
            BenchmarkFunction::Rosenbrock => FunctionClass::LowModerateConditioning,
            BenchmarkFunction::Ellipsoid | BenchmarkFunction::DifferentPowers => {
                FunctionClass::HighConditioningUnimodal
            }
            BenchmarkFunction::Griewank => FunctionClass::MultimodalAdequateStructure,
            BenchmarkFunction::Ackley | BenchmarkFunction::Schwefel12 => {
                FunctionClass::MultimodalWeakStructure
            }
        }
    }

    /// Unshifted value at `z`.
    pub fn eval(self, z: &[f64]) -> f64 {
        let d = z.len();
        match self {
            BenchmarkFunction::Sphere => z.iter().map(|v| v * v).sum(),
            BenchmarkFunction::Rastrigin => z
                .iter()
                .map(|v| v * v + 10.0 * (1.0 - (2.0 * PI * v).cos()))
                .sum(),
            // minimum moved from (1, ..., 1) to the origin
            BenchmarkFunction::Rosenbrock => z
                .windows(2)
                .map(|w| {
                    let (a, b) = (w[0] + 1.0, w[1] + 1.0);
                    100.0 * (a * a - b).powi(2) + (a - 1.0).powi(2)
                })
                .sum(),
            BenchmarkFunction::Ellipsoid => z
                .iter()
                .enumerate()
                .map(|(i, v)| ELLIPSOID_CONDITION.powf(axis_ratio(i, d)) * v * v)
                .sum(),
            BenchmarkFunction::DifferentPowers => z
                .iter()
                .enumerate()
                .map(|(i, v)| v.abs().powf(2.0 + 4.0 * axis_ratio(i, d)))
                .sum(),
            BenchmarkFunction::Griewank => {
                let sum: f64 = z.iter().map(|v| v * v).sum::<f64>() / 4000.0;
                let prod: f64 = z
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
                    .product();
                sum + (1.0 - prod)
            }
            BenchmarkFunction::Ackley => {
                let n = d as f64;
                let rms = (z.iter().map(|v| v * v).sum::<f64>() / n).sqrt();
                let mean_cos = z.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
                20.0 * (1.0 - (-0.2 * rms).exp()) + (E - mean_cos.exp()).max(0.0)
            }
            BenchmarkFunction::Schwefel12 => {
                let mut prefix = 0.0;
                z.iter()
                    .map(|v| {
                        prefix += v;
                        prefix * prefix
                    })
                    .sum()
            }
        }
    }
}

/// `(i) / (D - 1)`, or 0 in one dimension.
fn axis_ratio(i: usize, d: usize) -> f64 {
    if d <= 1 {
        0.0
    } else {
        i as f64 / (d - 1) as f64
    }
}

impl fmt::Display for BenchmarkFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for BenchmarkFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BenchmarkFunction::ALL
            .into_iter()
            .find(|f| f.id().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown function id {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchmarkSpec {
    pub function_id: String,
    pub dimension: usize,
    pub shift_seed: u64,
}

impl BenchmarkSpec {
    pub fn new(function_id: impl Into<String>, dimension: usize, shift_seed: u64) -> Self {
        Self {
            function_id: function_id.into(),
            dimension,
            shift_seed,
        }
    }
}

/// Optimum location for `(dimension, shift_seed)`.
pub fn shift_vector(dimension: usize, shift_seed: u64) -> Vec<f64> {
    let half = 0.5 * SHIFT_FRACTION * (UPPER_BOUND - LOWER_BOUND);
    let centre = 0.5 * (UPPER_BOUND + LOWER_BOUND);
    let mut rng = RngStream::new(shift_seed);
    (0..dimension)
        .map(|_| rng.uniform_range(centre - half, centre + half))
        .collect()
}

/// Builds the shifted problem named by `spec`.
pub fn make_problem(spec: &BenchmarkSpec) -> Result<Problem> {
    let function: BenchmarkFunction = spec.function_id.parse()?;
    make_problem_with_shift(function, shift_vector(spec.dimension, spec.shift_seed))
}

/// Shifted problem around an explicit optimum.
pub fn make_problem_with_shift(function: BenchmarkFunction, shift: Vec<f64>) -> Result<Problem> {
    let d = shift.len();
    if d == 0 {
        return Err(Error::Config(
            "benchmark dimension must be at least 1".into(),
        ));
    }
    let bounds = SearchBounds::cube(d, LOWER_BOUND, UPPER_BOUND)?;
    let name = format!("{}-d{d}", function.id());
    Problem::new(name, d, bounds, 0.0, move |x: &[f64]| {
        let z: Vec<f64> = x.iter().zip(&shift).map(|(a, s)| a - s).collect();
        function.eval(&z)
    })
}

pub fn function_ids() -> impl Iterator<Item = &'static str> {
    BenchmarkFunction::ALL
        .into_iter()
        .map(BenchmarkFunction::id)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_lookup() {
        for f in BenchmarkFunction::ALL {
            assert_eq!(f.id().parse::<BenchmarkFunction>().unwrap(), f);
        }
        assert!(make_problem(&BenchmarkSpec::new("nope", 3, 0))
            .unwrap_err()
            .is_config());
        assert!(make_problem(&BenchmarkSpec::new("sphere", 0, 0)).is_err());
    }

    #[test]
    fn every_class_represented() {
        for class in [
            FunctionClass::Separable,
            FunctionClass::LowModerateConditioning,
            FunctionClass::HighConditioningUnimodal,
            FunctionClass::MultimodalAdequateStructure,
            FunctionClass::MultimodalWeakStructure,
        ] {
            assert!(
                BenchmarkFunction::ALL.iter().any(|f| f.class() == class),
                "{}",
                class.label()
            );
        }
    }

    #[test]
    fn sphere_values() {
        let p = make_problem_with_shift(BenchmarkFunction::Sphere, vec![0.0, 0.0]).unwrap();
        assert_eq!(p.objective_value(&[3.0, 4.0]), 25.0);
        let p = make_problem(&BenchmarkSpec::new("sphere", 6, 12)).unwrap();
        assert_eq!(p.objective_value(&shift_vector(6, 12)), 0.0);
    }

    #[test]
    fn ellipsoid_two_dims() {
        let p = make_problem_with_shift(BenchmarkFunction::Ellipsoid, vec![0.0, 0.0]).unwrap();
        // 10^(6*0/1) * 1 + 10^(6*1/1) * 1
        assert_eq!(p.objective_value(&[1.0, 1.0]), 1.0 + 1e6);
    }

    #[test]
    fn one_dimensional_functions_are_defined() {
        for f in BenchmarkFunction::ALL {
            let p = make_problem_with_shift(f, vec![0.5]).unwrap();
            assert_eq!(p.objective_value(&[0.5]), 0.0, "{f}");
            assert!(p.objective_value(&[-2.0]).is_finite());
        }
    }

    #[test]
    fn known_values() {
        assert_eq!(BenchmarkFunction::Schwefel12.eval(&[1.0, 2.0]), 1.0 + 9.0);
        assert_eq!(BenchmarkFunction::Rosenbrock.eval(&[-1.0, -1.0]), 1.0);
        assert_eq!(
            BenchmarkFunction::DifferentPowers.eval(&[2.0, 2.0]),
            4.0 + 64.0
        );
        assert!((BenchmarkFunction::Rastrigin.eval(&[0.5]) - 20.25).abs() < 1e-12);
    }
}
