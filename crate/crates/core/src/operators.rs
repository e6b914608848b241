//! Variation operators: scale factors, the mutation-scheme pool, binomial
//! crossover and one-to-one greedy selection.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::population::Individual;
use crate::rng::RngStream;

/// Lower end of the per-dimension scale-factor interval.
pub const SCALE_FACTOR_MIN: f64 = 0.1;
/// Upper end (exclusive) of the per-dimension scale-factor interval.
pub const SCALE_FACTOR_MAX: f64 = 1.5;

/// One entry of the mutation pool.
///
/// `X_best` and the target vector are not counted in [`parent_count`](Self::parent_count).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MutationScheme {
    /// `v = x1 + F (x2 - x3)`
    Rand1,
    /// `v = best + F (x1 - x2)`
    Best1,
    /// `v = x + F (best - x) + F (x1 - x2)`
    TargetToBest1,
    /// `v = x1 + F (x2 - x3) + F (x4 - x5)`
    Rand2,
    /// `v = best + F (x1 - x2) + F (x3 - x4)`
    Best2,
}

impl MutationScheme {
    pub const ALL: [MutationScheme; 5] = [
        MutationScheme::Rand1,
        MutationScheme::Best1,
        MutationScheme::TargetToBest1,
        MutationScheme::Rand2,
        MutationScheme::Best2,
    ];

    pub fn parent_count(self) -> usize {
        match self {
            MutationScheme::Rand1 => 3,
            MutationScheme::Best1 => 2,
            MutationScheme::TargetToBest1 => 2,
            MutationScheme::Rand2 => 5,
            MutationScheme::Best2 => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MutationScheme::Rand1 => "rand/1",
            MutationScheme::Best1 => "best/1",
            MutationScheme::TargetToBest1 => "target-to-best/1",
            MutationScheme::Rand2 => "rand/2",
            MutationScheme::Best2 => "best/2",
        }
    }
}

impl fmt::Display for MutationScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MutationScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MutationScheme::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown mutation scheme {s:?}")))
    }
}

/// Per-dimension mutation scale factors of one individual.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleFactorVector(Vec<f64>);

impl ScaleFactorVector {
    /// The same factor on every axis.
    pub fn constant(dimension: usize, f: f64) -> Self {
        Self(vec![f; dimension])
    }

    pub fn from_values(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Draws `d` independent factors uniformly from `[0.1, 1.5)`.
pub fn sample_scale_factors(d: usize, rng: &mut RngStream) -> ScaleFactorVector {
    ScaleFactorVector(
        (0..d)
            .map(|_| rng.uniform_range(SCALE_FACTOR_MIN, SCALE_FACTOR_MAX))
            .collect(),
    )
}

/// Uniform choice from the pool. A singleton pool consumes no randomness.
pub fn pick_scheme(pool: &[MutationScheme], rng: &mut RngStream) -> Result<MutationScheme> {
    match pool {
        [] => Err(Error::Config("mutation scheme pool is empty".into())),
        [only] => Ok(*only),
        _ => Ok(pool[rng.index(pool.len())]),
    }
}

/// `j` distinct population indices, none equal to `target`.
pub fn select_parents(
    np: usize,
    target: usize,
    j: usize,
    rng: &mut RngStream,
) -> Result<Vec<usize>> {
    if np < j + 1 {
        return Err(Error::Config(format!(
            "population of {np} is too small for a scheme with {j} parents"
        )));
    }
    if target >= np {
        return Err(Error::Contract(format!(
            "target index {target} outside population of {np}"
        )));
    }
    rng.distinct_excluding(np, j, target)
        .ok_or_else(|| Error::Contract("not enough candidates for parent selection".into()))
}

/// Mutant vector of `scheme`, with `f[d]` standing in for `F` on axis `d`.
///
/// The result is not clamped; the caller owns the bound policy.
pub fn apply_mutation_scheme(
    scheme: MutationScheme,
    target: &[f64],
    best: &[f64],
    parents: &[&[f64]],
    f: &ScaleFactorVector,
) -> Result<Vec<f64>> {
    if parents.len() != scheme.parent_count() {
        return Err(Error::Contract(format!(
            "{scheme} needs {} parents, got {}",
            scheme.parent_count(),
            parents.len()
        )));
    }
    let d = target.len();
    if best.len() != d || f.len() != d || parents.iter().any(|p| p.len() != d) {
        return Err(Error::Contract(
            "mutation inputs differ in dimension".into(),
        ));
    }
    let f = f.values();
    let p = parents;
    let mutant = (0..d)
        .map(|k| match scheme {
            MutationScheme::Rand1 => p[0][k] + f[k] * (p[1][k] - p[2][k]),
            MutationScheme::Best1 => best[k] + f[k] * (p[0][k] - p[1][k]),
            MutationScheme::TargetToBest1 => {
                target[k] + f[k] * (best[k] - target[k]) + f[k] * (p[0][k] - p[1][k])
            }
            MutationScheme::Rand2 => {
                p[0][k] + f[k] * (p[1][k] - p[2][k]) + f[k] * (p[3][k] - p[4][k])
            }
            MutationScheme::Best2 => {
                best[k] + f[k] * (p[0][k] - p[1][k]) + f[k] * (p[2][k] - p[3][k])
            }
        })
        .collect();
    Ok(mutant)
}

/// Binomial crossover.
///
/// Draws the forced axis first, then one uniform per axis (including the
/// forced one) and takes the mutant coordinate when that draw is `<= cr`.
pub fn crossover(parent: &[f64], mutant: &[f64], cr: f64, rng: &mut RngStream) -> Vec<f64> {
    debug_assert_eq!(parent.len(), mutant.len());
    let forced = rng.index(parent.len());
    parent
        .iter()
        .zip(mutant)
        .enumerate()
        .map(|(d, (&x, &v))| {
            let take = rng.uniform() <= cr;
            if take || d == forced {
                v
            } else {
                x
            }
        })
        .collect()
}

/// Survivor of a parent/trial pair under minimization; ties go to the trial.
pub fn greedy_select(parent: Individual, trial: Individual) -> Result<Individual> {
    if trial.require_fitness()? <= parent.require_fitness()? {
        Ok(trial)
    } else {
        Ok(parent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parent_counts_match_formulas() {
        let counts: Vec<usize> = MutationScheme::ALL
            .iter()
            .map(|m| m.parent_count())
            .collect();
        assert_eq!(counts, vec![3, 2, 2, 5, 4]);
    }

    #[test]
    fn scheme_names_round_trip() {
        for m in MutationScheme::ALL {
            assert_eq!(m.name().parse::<MutationScheme>().unwrap(), m);
        }
        assert!("rand/3".parse::<MutationScheme>().is_err());
    }

    #[test]
    fn scale_factors_in_range() {
        let mut rng = RngStream::new(11);
        let f = sample_scale_factors(1000, &mut rng);
        assert_eq!(f.len(), 1000);
        assert!(f
            .values()
            .iter()
            .all(|v| (SCALE_FACTOR_MIN..SCALE_FACTOR_MAX).contains(v)));
        let again = sample_scale_factors(1000, &mut RngStream::new(11));
        assert_eq!(f, again);
    }

    #[test]
    fn singleton_pool_and_empty_pool() {
        let mut rng = RngStream::new(0);
        for _ in 0..100 {
            assert_eq!(
                pick_scheme(&[MutationScheme::Best2], &mut rng).unwrap(),
                MutationScheme::Best2
            );
        }
        assert!(matches!(pick_scheme(&[], &mut rng), Err(Error::Config(_))));
    }

    #[test]
    fn scheme_sequence_reproducible() {
        let draw = |seed| {
            let mut rng = RngStream::new(seed);
            (0..200)
                .map(|_| pick_scheme(&MutationScheme::ALL, &mut rng).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(9), draw(9));
    }

    #[test]
    fn five_of_six_is_the_complement() {
        let mut rng = RngStream::new(2);
        for target in 0..6 {
            let mut picks = select_parents(6, target, 5, &mut rng).unwrap();
            picks.sort_unstable();
            let expected: Vec<usize> = (0..6).filter(|&i| i != target).collect();
            assert_eq!(picks, expected);
        }
    }

    #[test]
    fn three_of_six_distinct() {
        let mut rng = RngStream::new(8);
        for n in 0..10_000 {
            let target = n % 6;
            let picks = select_parents(6, target, 3, &mut rng).unwrap();
            assert_eq!(picks.len(), 3);
            assert!(picks.iter().all(|&p| p < 6 && p != target));
            assert!(picks[0] != picks[1] && picks[1] != picks[2] && picks[0] != picks[2]);
        }
    }

    #[test]
    fn too_small_population_rejected() {
        let mut rng = RngStream::new(0);
        assert!(matches!(
            select_parents(3, 0, 3, &mut rng),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn rand1_arithmetic() {
        let f = ScaleFactorVector::constant(2, 0.5);
        let v = apply_mutation_scheme(
            MutationScheme::Rand1,
            &[0.0, 0.0],
            &[0.0, 0.0],
            &[&[1.0, 2.0], &[3.0, 0.0], &[1.0, 1.0]],
            &f,
        )
        .unwrap();
        assert_eq!(v, vec![2.0, 1.5]);
    }

    #[test]
    fn equal_inputs_are_a_fixed_point() {
        let c = [0.3, -1.2, 4.0];
        let f = ScaleFactorVector::from_values(vec![0.2, 1.1, 1.4]);
        for m in MutationScheme::ALL {
            let parents: Vec<&[f64]> = (0..m.parent_count()).map(|_| &c[..]).collect();
            assert_eq!(
                apply_mutation_scheme(m, &c, &c, &parents, &f).unwrap(),
                c.to_vec(),
                "{m}"
            );
        }
    }

    #[test]
    fn best2_with_zero_factor_is_best() {
        let best = [7.0, -3.0];
        let f = ScaleFactorVector::constant(2, 0.0);
        let parents: [&[f64]; 4] = [&[1.0, 2.0], &[3.0, 4.0], &[5.0, 6.0], &[-1.0, 0.5]];
        let v =
            apply_mutation_scheme(MutationScheme::Best2, &[0.0, 0.0], &best, &parents, &f).unwrap();
        assert_eq!(v, best.to_vec());
    }

    #[test]
    fn target_to_best_and_rand2_formulas() {
        let f = ScaleFactorVector::from_values(vec![0.5, 2.0]);
        let target = [1.0, 1.0];
        let best = [3.0, 0.0];
        let v = apply_mutation_scheme(
            MutationScheme::TargetToBest1,
            &target,
            &best,
            &[&[2.0, 2.0], &[1.0, 3.0]],
            &f,
        )
        .unwrap();
        // 1 + 0.5*(3-1) + 0.5*(2-1) = 2.5 ; 1 + 2*(0-1) + 2*(2-3) = -3
        assert_eq!(v, vec![2.5, -3.0]);
        let r2 = apply_mutation_scheme(
            MutationScheme::Rand2,
            &target,
            &best,
            &[
                &[0.0, 0.0],
                &[1.0, 1.0],
                &[0.0, 0.0],
                &[2.0, 2.0],
                &[1.0, 0.0],
            ],
            &f,
        )
        .unwrap();
        assert_eq!(r2, vec![1.0, 6.0]);
    }

    #[test]
    fn parent_count_mismatch_is_contract_violation() {
        let f = ScaleFactorVector::constant(1, 0.5);
        let err = apply_mutation_scheme(MutationScheme::Rand2, &[0.0], &[0.0], &[&[0.0]], &f)
            .unwrap_err();
        assert!(matches!(err, Error::Contract(_)));
    }

    #[test]
    fn rand1_is_linear_in_f() {
        let mut rng = RngStream::new(4);
        for _ in 0..100 {
            let d = 6;
            let pts: Vec<Vec<f64>> = (0..3)
                .map(|_| (0..d).map(|_| rng.uniform_range(-5.0, 5.0)).collect())
                .collect();
            let parents: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
            let f = sample_scale_factors(d, &mut rng);
            let f2 = ScaleFactorVector::from_values(f.values().iter().map(|v| 2.0 * v).collect());
            let v1 = apply_mutation_scheme(MutationScheme::Rand1, &pts[0], &pts[0], &parents, &f)
                .unwrap();
            let v2 = apply_mutation_scheme(MutationScheme::Rand1, &pts[0], &pts[0], &parents, &f2)
                .unwrap();
            for k in 0..d {
                let lhs = v2[k] - pts[0][k];
                let rhs = 2.0 * (v1[k] - pts[0][k]);
                assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(rhs.abs()).max(1.0));
            }
        }
    }

    #[test]
    fn crossover_edge_rates() {
        let mut rng = RngStream::new(6);
        let x = [0.0; 8];
        let v = [1.0; 8];
        assert_eq!(crossover(&x, &v, 1.0, &mut rng), v.to_vec());
        for _ in 0..100 {
            let u = crossover(&x, &v, 0.0, &mut rng);
            assert_eq!(u.iter().filter(|&&c| c == 1.0).count(), 1);
        }
        assert_eq!(crossover(&[5.0], &[9.0], 0.0, &mut rng), vec![9.0]);
    }

    #[test]
    fn greedy_selection_rules() {
        let x = Individual::evaluated(vec![0.0], 5.0);
        let better = Individual::evaluated(vec![1.0], 3.0);
        let tie = Individual::evaluated(vec![2.0], 5.0);
        let worse = Individual::evaluated(vec![3.0], 7.0);
        assert_eq!(greedy_select(x.clone(), better.clone()).unwrap(), better);
        assert_eq!(greedy_select(x.clone(), tie.clone()).unwrap(), tie);
        assert_eq!(greedy_select(x.clone(), worse).unwrap(), x);
        assert!(greedy_select(x, Individual::unevaluated(vec![0.0])).is_err());
    }
}
