//! Candidate solutions and population initialization.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{evaluate, BudgetCounter, Problem};
use crate::rng::RngStream;

/// A point in the search space with its cached objective value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    position: Vec<f64>,
    fitness: Option<f64>,
}

impl Individual {
    pub fn unevaluated(position: Vec<f64>) -> Self {
        Self {
            position,
            fitness: None,
        }
    }

    pub fn evaluated(position: Vec<f64>, fitness: f64) -> Self {
        Self {
            position,
            fitness: Some(fitness),
        }
    }

    /// Evaluates `position` through the budget and wraps the result.
    pub fn evaluate(
        problem: &Problem,
        position: Vec<f64>,
        budget: &mut BudgetCounter,
    ) -> Result<Self> {
        let fitness = evaluate(problem, &position, budget)?;
        Ok(Self::evaluated(position, fitness))
    }

    pub fn position(&self) -> &[f64] {
        &self.position
    }

    pub fn fitness(&self) -> Option<f64> {
        self.fitness
    }

    pub fn into_position(self) -> Vec<f64> {
        self.position
    }

    /// Fitness, or a contract violation when the individual was never evaluated.
    pub fn require_fitness(&self) -> Result<f64> {
        self.fitness
            .ok_or_else(|| Error::Contract("individual has no fitness".into()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Population {
    members: Vec<Individual>,
    generation: u64,
}

impl Population {
    pub fn new(members: Vec<Individual>, generation: u64) -> Self {
        Self {
            members,
            generation,
        }
    }

    pub fn members(&self) -> &[Individual] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn get(&self, i: usize) -> &Individual {
        &self.members[i]
    }

    pub fn into_members(self) -> Vec<Individual> {
        self.members
    }

    /// Index of the lowest fitness, lowest index on ties.
    pub fn best_index(&self) -> Result<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (i, m) in self.members.iter().enumerate() {
            let f = m.require_fitness()?;
            if best.is_none_or(|(_, bf)| f < bf) {
                best = Some((i, f));
            }
        }
        best.map(|(i, _)| i)
            .ok_or_else(|| Error::Contract("empty population has no best member".into()))
    }

    pub fn best(&self) -> Result<&Individual> {
        Ok(&self.members[self.best_index()?])
    }
}

/// Draws `np` uniform points inside the problem box and evaluates each one.
pub fn init_population(
    problem: &Problem,
    np: usize,
    rng: &mut RngStream,
    budget: &mut BudgetCounter,
) -> Result<Population> {
    if np == 0 {
        return Err(Error::Config("population size must be at least 1".into()));
    }
    let bounds = problem.bounds();
    if bounds.dimension() != problem.dimension() {
        return Err(Error::Config("problem and bounds dimensions differ".into()));
    }
    if budget.remaining() < np as u64 {
        return Err(Error::Config(format!(
            "budget has {} evaluations left, initialization needs {np}",
            budget.remaining()
        )));
    }
    let mut members = Vec::with_capacity(np);
    for _ in 0..np {
        let position: Vec<f64> = bounds
            .lower()
            .iter()
            .zip(bounds.upper())
            .map(|(&lo, &hi)| rng.uniform_range(lo, hi))
            .collect();
        members.push(Individual::evaluate(problem, position, budget)?);
    }
    Ok(Population::new(members, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::SearchBounds;

    fn unit_cube(d: usize) -> Problem {
        let bounds = SearchBounds::cube(d, 0.0, 1.0).unwrap();
        Problem::new("sum", d, bounds, 0.0, |x: &[f64]| x.iter().sum()).unwrap()
    }

    #[test]
    fn init_fills_box_and_counts() {
        let p = unit_cube(3);
        let mut rng = RngStream::new(5);
        let mut budget = BudgetCounter::new(100);
        let pop = init_population(&p, 4, &mut rng, &mut budget).unwrap();
        assert_eq!(pop.len(), 4);
        assert_eq!(budget.nfc(), 4);
        for m in pop.members() {
            assert_eq!(m.position().len(), 3);
            assert!(m.position().iter().all(|v| (0.0..1.0).contains(v)));
            assert_eq!(m.fitness(), Some(p.objective_value(m.position())));
        }
    }

    #[test]
    fn init_is_reproducible() {
        let p = unit_cube(5);
        let run = || {
            let mut rng = RngStream::new(42);
            let mut budget = BudgetCounter::new(100);
            init_population(&p, 6, &mut rng, &mut budget).unwrap()
        };
        let a = run();
        let b = run();
        for (x, y) in a.members().iter().zip(b.members()) {
            let xb: Vec<u64> = x.position().iter().map(|v| v.to_bits()).collect();
            let yb: Vec<u64> = y.position().iter().map(|v| v.to_bits()).collect();
            assert_eq!(xb, yb);
        }
    }

    #[test]
    fn init_checks_budget_and_size() {
        let p = unit_cube(2);
        let mut rng = RngStream::new(0);
        assert!(init_population(&p, 0, &mut rng, &mut BudgetCounter::new(10)).is_err());
        assert!(init_population(&p, 6, &mut rng, &mut BudgetCounter::new(5)).is_err());
    }

    #[test]
    fn best_index_prefers_lowest_index_on_ties() {
        let pop = Population::new(
            vec![
                Individual::evaluated(vec![0.0], 3.0),
                Individual::evaluated(vec![1.0], 1.0),
                Individual::evaluated(vec![2.0], 1.0),
            ],
            0,
        );
        assert_eq!(pop.best_index().unwrap(), 1);
        let bad = Population::new(vec![Individual::unevaluated(vec![0.0])], 0);
        assert!(bad.best_index().is_err());
    }
}
