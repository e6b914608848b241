//! Search space, objective wrapper and evaluation accounting.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axis-aligned box `[lower[d], upper[d]]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchBounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl SearchBounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::Config(format!(
                "bounds have {} lower and {} upper entries",
                lower.len(),
                upper.len()
            )));
        }
        if lower.is_empty() {
            return Err(Error::Config(
                "bounds must have at least one dimension".into(),
            ));
        }
        for (d, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::Config(format!(
                    "dimension {d}: need finite lower < upper, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// The same interval on every axis.
    pub fn cube(dimension: usize, lower: f64, upper: f64) -> Result<Self> {
        Self::new(vec![lower; dimension], vec![upper; dimension])
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dimension()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| *lo <= *v && *v <= *hi)
    }

    /// Moves every out-of-range coordinate onto the nearest bound.
    pub fn clamp(&self, x: &mut [f64]) {
        for (v, (lo, hi)) in x.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *v = v.clamp(*lo, *hi);
        }
    }
}

pub type Objective = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A box-constrained minimization problem with a known value-to-reach.
#[derive(Clone)]
pub struct Problem {
    name: String,
    dimension: usize,
    bounds: SearchBounds,
    objective: Objective,
    vtr: f64,
}

impl Problem {
    pub fn new<F>(
        name: impl Into<String>,
        dimension: usize,
        bounds: SearchBounds,
        vtr: f64,
        objective: F,
    ) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        if dimension == 0 {
            return Err(Error::Config("problem dimension must be at least 1".into()));
        }
        if bounds.dimension() != dimension {
            return Err(Error::Config(format!(
                "problem dimension {dimension} does not match bounds dimension {}",
                bounds.dimension()
            )));
        }
        Ok(Self {
            name: name.into(),
            dimension,
            bounds,
            objective: Arc::new(objective),
            vtr,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn bounds(&self) -> &SearchBounds {
        &self.bounds
    }

    pub fn vtr(&self) -> f64 {
        self.vtr
    }

    /// Calls the objective without any accounting. Optimizer code goes
    /// through [`evaluate`] instead.
    pub fn objective_value(&self, x: &[f64]) -> f64 {
        (self.objective)(x)
    }
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("dimension", &self.dimension)
            .field("vtr", &self.vtr)
            .finish_non_exhaustive()
    }
}

/// Counts objective calls against a budget.
///
/// `nfc_max` is the budget the loop guard checks; `slack` is how far a
/// generation already in progress may run past it before evaluation fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetCounter {
    nfc: u64,
    nfc_max: u64,
    slack: u64,
}

impl BudgetCounter {
    pub fn new(nfc_max: u64) -> Self {
        Self::with_slack(nfc_max, 0)
    }

    pub fn with_slack(nfc_max: u64, slack: u64) -> Self {
        Self {
            nfc: 0,
            nfc_max,
            slack,
        }
    }

    pub fn nfc(&self) -> u64 {
        self.nfc
    }

    pub fn nfc_max(&self) -> u64 {
        self.nfc_max
    }

    pub fn hard_limit(&self) -> u64 {
        self.nfc_max + self.slack
    }

    /// Evaluations left before `nfc_max`.
    pub fn remaining(&self) -> u64 {
        self.nfc_max.saturating_sub(self.nfc)
    }

    pub fn exhausted(&self) -> bool {
        self.nfc >= self.nfc_max
    }

    fn charge(&mut self) -> Result<()> {
        if self.nfc >= self.hard_limit() {
            return Err(Error::BudgetExceeded {
                nfc: self.nfc,
                limit: self.hard_limit(),
            });
        }
        self.nfc += 1;
        Ok(())
    }
}

/// Evaluates `position`, charging one call to `budget`.
///
/// The call is charged even when the objective returns a non-finite value.
pub fn evaluate(problem: &Problem, position: &[f64], budget: &mut BudgetCounter) -> Result<f64> {
    if position.len() != problem.dimension() {
        return Err(Error::Contract(format!(
            "position has {} coordinates, problem {} expects {}",
            position.len(),
            problem.name(),
            problem.dimension()
        )));
    }
    budget.charge()?;
    let value = problem.objective_value(position);
    if !value.is_finite() {
        return Err(Error::Evaluation {
            position: position.to_vec(),
            value,
        });
    }
    Ok(value)
}
