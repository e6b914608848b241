//! Min-max opposition in variable space (used for initialization and
//! generation jumping) and the objective-space reflection utility.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::population::{Individual, Population};
use crate::problem::{BudgetCounter, Problem, SearchBounds};

/// When the optimizer evaluates the opposite population.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "jump_rate", rename_all = "snake_case")]
pub enum OppositionMode {
    Never,
    /// Opposition on the initial population only.
    InitOnly,
    /// At initialization and after every generation.
    EveryGeneration,
    /// At initialization, then after a generation with probability `jr`.
    Probabilistic(f64),
}

impl OppositionMode {
    pub fn validate(&self) -> Result<()> {
        match *self {
            OppositionMode::Probabilistic(jr) if !(0.0..=1.0).contains(&jr) => {
                Err(Error::Config(format!("jumping rate {jr} outside [0, 1]")))
            }
            _ => Ok(()),
        }
    }

    pub fn at_init(&self) -> bool {
        !matches!(self, OppositionMode::Never)
    }
}

/// Reflection of `x` through the centre of the box.
pub fn opposite_point(x: &[f64], bounds: &SearchBounds) -> Result<Vec<f64>> {
    if !bounds.contains(x) {
        return Err(Error::Contract(format!(
            "point {x:?} is not inside the search bounds"
        )));
    }
    let mut opposite: Vec<f64> = x
        .iter()
        .zip(bounds.lower().iter().zip(bounds.upper()))
        .map(|(&v, (&lo, &hi))| hi + lo - v)
        .collect();
    // rounding in hi + lo can push a boundary point one ulp outside
    bounds.clamp(&mut opposite);
    Ok(opposite)
}

/// Opposite of every member, each evaluated once.
pub fn opposite_population(
    population: &Population,
    bounds: &SearchBounds,
    problem: &Problem,
    budget: &mut BudgetCounter,
) -> Result<Population> {
    let members = population
        .members()
        .iter()
        .map(|m| {
            let position = opposite_point(m.position(), bounds)?;
            Individual::evaluate(problem, position, budget)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Population::new(members, population.generation()))
}

/// The `N_P` fittest members of `population ∪ opposites`.
///
/// Ties at the cut prefer members of `population`, then lower slot index.
/// Survivors keep their relative order: originals first, then opposites.
pub fn merge_select_best(population: &Population, opposites: &Population) -> Result<Population> {
    let np = population.len();
    if opposites.len() != np {
        return Err(Error::Contract(format!(
            "population has {np} members but opposite population has {}",
            opposites.len()
        )));
    }
    let mut ranked: Vec<(f64, usize, usize)> = Vec::with_capacity(2 * np);
    for (origin, pop) in [population, opposites].into_iter().enumerate() {
        for (i, m) in pop.members().iter().enumerate() {
            ranked.push((m.require_fitness()?, origin, i));
        }
    }
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut chosen: Vec<(usize, usize)> = ranked[..np].iter().map(|&(_, o, i)| (o, i)).collect();
    chosen.sort_unstable();
    let members = chosen
        .into_iter()
        .map(|(o, i)| {
            if o == 0 {
                population.get(i)
            } else {
                opposites.get(i)
            }
            .clone()
        })
        .collect();
    Ok(Population::new(members, population.generation()))
}

/// Reflection of an objective value inside `[ymin, ymax]`.
pub fn type2_opposite_value(f: f64, ymin: f64, ymax: f64) -> Result<f64> {
    if !(ymin <= f && f <= ymax) {
        return Err(Error::Domain(format!("value {f} outside [{ymin}, {ymax}]")));
    }
    Ok(ymin + ymax - f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    fn pop_with(fitness: &[f64]) -> Population {
        Population::new(
            fitness
                .iter()
                .enumerate()
                .map(|(i, &f)| Individual::evaluated(vec![i as f64], f))
                .collect(),
            0,
        )
    }

    fn fitness_of(p: &Population) -> Vec<f64> {
        p.members().iter().map(|m| m.fitness().unwrap()).collect()
    }

    #[test]
    fn opposite_point_arithmetic() {
        let b = SearchBounds::cube(1, 0.0, 10.0).unwrap();
        assert_eq!(opposite_point(&[2.0], &b).unwrap(), vec![8.0]);
        assert_eq!(opposite_point(&[5.0], &b).unwrap(), vec![5.0]);
        let b = SearchBounds::cube(1, -5.0, 5.0).unwrap();
        assert_eq!(opposite_point(&[-5.0], &b).unwrap(), vec![5.0]);
        assert!(matches!(
            opposite_point(&[6.0], &b),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn opposite_population_counts_and_involution() {
        let bounds = SearchBounds::new(vec![-1.0, 0.0, 2.0], vec![3.0, 10.0, 2.5]).unwrap();
        let problem =
            Problem::new("sum", 3, bounds.clone(), 0.0, |x: &[f64]| x.iter().sum()).unwrap();
        let mut rng = RngStream::new(1);
        let mut budget = BudgetCounter::new(1000);
        let pop = crate::population::init_population(&problem, 6, &mut rng, &mut budget).unwrap();
        let before = budget.nfc();
        let opp = opposite_population(&pop, &bounds, &problem, &mut budget).unwrap();
        assert_eq!(budget.nfc() - before, 6);
        let back = opposite_population(&opp, &bounds, &problem, &mut budget).unwrap();
        for (a, b) in pop.members().iter().zip(back.members()) {
            for (x, y) in a.position().iter().zip(b.position()) {
                assert!((x - y).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn midpoint_population_is_fixed() {
        let bounds = SearchBounds::cube(2, -4.0, 2.0).unwrap();
        let problem = Problem::new("c", 2, bounds.clone(), 0.0, |_: &[f64]| 1.0).unwrap();
        let pop = Population::new(vec![Individual::evaluated(vec![-1.0, -1.0], 1.0); 3], 0);
        let mut budget = BudgetCounter::new(10);
        let opp = opposite_population(&pop, &bounds, &problem, &mut budget).unwrap();
        assert_eq!(budget.nfc(), 3);
        for m in opp.members() {
            assert_eq!(m.position(), &[-1.0, -1.0]);
        }
    }

    #[test]
    fn merge_keeps_dominant_original() {
        let p = Population::new(
            vec![
                Individual::evaluated(vec![0.0], 3.0),
                Individual::evaluated(vec![1.0], 1.0),
                Individual::evaluated(vec![2.0], 2.0),
            ],
            4,
        );
        let opp = pop_with(&[10.0, 20.0, 30.0]);
        assert_eq!(merge_select_best(&p, &opp).unwrap(), p);
    }

    #[test]
    fn merge_picks_smallest_of_union() {
        let p = pop_with(&[5.0, 1.0, 9.0]);
        let opp = pop_with(&[2.0, 8.0, 0.0]);
        let mut got = fitness_of(&merge_select_best(&p, &opp).unwrap());
        got.sort_by(f64::total_cmp);
        assert_eq!(got, vec![0.0, 1.0, 2.0]);
    }

    #[test]
    fn merge_ties_prefer_originals() {
        let p = Population::new(
            vec![
                Individual::evaluated(vec![0.0], 1.0),
                Individual::evaluated(vec![1.0], 4.0),
            ],
            0,
        );
        let opp = Population::new(
            vec![
                Individual::evaluated(vec![9.0], 4.0),
                Individual::evaluated(vec![8.0], 1.0),
            ],
            0,
        );
        let merged = merge_select_best(&p, &opp).unwrap();
        assert_eq!(merged.get(0).position(), &[0.0]);
        assert_eq!(merged.get(1).position(), &[8.0]);
    }

    #[test]
    fn merge_rejects_unevaluated_and_size_mismatch() {
        let p = pop_with(&[1.0, 2.0]);
        let bad = Population::new(
            vec![
                Individual::evaluated(vec![0.0], 1.0),
                Individual::unevaluated(vec![0.0]),
            ],
            0,
        );
        assert!(merge_select_best(&p, &bad).is_err());
        assert!(merge_select_best(&p, &pop_with(&[1.0])).is_err());
    }

    #[test]
    fn type2_reflection() {
        assert_eq!(type2_opposite_value(3.0, 0.0, 10.0).unwrap(), 7.0);
        assert_eq!(type2_opposite_value(5.0, 0.0, 10.0).unwrap(), 5.0);
        let once = type2_opposite_value(2.75, -1.0, 4.0).unwrap();
        assert_eq!(type2_opposite_value(once, -1.0, 4.0).unwrap(), 2.75);
        assert!(matches!(
            type2_opposite_value(11.0, 0.0, 10.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn probabilistic_rate_validated() {
        assert!(OppositionMode::Probabilistic(0.3).validate().is_ok());
        assert!(OppositionMode::Probabilistic(1.2).validate().is_err());
        assert!(!OppositionMode::Never.at_init());
        assert!(OppositionMode::InitOnly.at_init());
    }
}
