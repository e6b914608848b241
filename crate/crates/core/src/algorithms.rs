//! The generation loop and the named variant presets.
//!
//! Every variant shares one engine. What separates them is the
//! [`StrategyConfig`]: how the scale factor is drawn, which mutation
//! schemes are in the pool, and when opposition is applied.
//!
//! Per generation the engine works synchronously: `X_best` and all parents
//! come from the population as it stood at the start of the generation, and
//! survivors replace it only after every trial has been evaluated. The
//! draw order per individual is scheme (multi-scheme pools only), parents,
//! scale factors (random mode only), forced crossover axis, one crossover
//! uniform per axis. A probabilistic jump then consumes one more uniform
//! per generation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{
    apply_mutation_scheme, crossover, pick_scheme, sample_scale_factors, select_parents,
    MutationScheme, ScaleFactorVector,
};
use crate::opposition::{merge_select_best, opposite_population, OppositionMode};
use crate::population::{init_population, Individual, Population};
use crate::problem::{BudgetCounter, Problem};
use crate::rng::RngStream;
use crate::trace::ConvergenceTrace;

pub const DEFAULT_NP: usize = 6;
pub const DEFAULT_CR: f64 = 0.9;
pub const DEFAULT_EVTR: f64 = 1e-8;
pub const NFC_PER_DIMENSION: u64 = 5000;
/// Scale factor of the fixed-F presets.
pub const FIXED_F: f64 = 0.5;
/// Jumping rate of the ODE preset.
pub const ODE_JUMP_RATE: f64 = 0.3;
/// Population size of the classic DE preset.
pub const CLASSIC_DE_NP: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "f", rename_all = "snake_case")]
pub enum ScaleFactorMode {
    Fixed(f64),
    /// Fresh uniform factor per dimension, per individual, per generation.
    VectorizedRandom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyConfig {
    pub np: usize,
    pub cr: f64,
    pub scale_factor_mode: ScaleFactorMode,
    pub scheme_pool: Vec<MutationScheme>,
    pub opposition: OppositionMode,
    pub nfc_max: u64,
    pub evtr: f64,
}

impl StrategyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.scheme_pool.is_empty() {
            return Err(Error::Config("mutation scheme pool is empty".into()));
        }
        let needed = self
            .scheme_pool
            .iter()
            .map(|m| m.parent_count() + 1)
            .max()
            .unwrap_or(1);
        if self.np < needed {
            return Err(Error::Config(format!(
                "population size {} is below {needed}, the minimum for this scheme pool",
                self.np
            )));
        }
        if !(0.0..=1.0).contains(&self.cr) {
            return Err(Error::Config(format!(
                "crossover rate {} outside [0, 1]",
                self.cr
            )));
        }
        if self.evtr.is_nan() || self.evtr <= 0.0 {
            return Err(Error::Config(format!(
                "error-to-reach must be positive, got {}",
                self.evtr
            )));
        }
        if self.nfc_max < self.np as u64 {
            return Err(Error::Config(format!(
                "budget {} is smaller than the population size {}",
                self.nfc_max, self.np
            )));
        }
        if let ScaleFactorMode::Fixed(f) = self.scale_factor_mode {
            if !f.is_finite() {
                return Err(Error::Config(format!("scale factor {f} is not finite")));
            }
        }
        self.opposition.validate()
    }

    /// Evaluations one generation may spend past `nfc_max`.
    pub fn overshoot_allowance(&self) -> u64 {
        2 * self.np as u64
    }
}

/// Named algorithm variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    De,
    Mde,
    Mdevm,
    Emde,
    Oiemde,
    Oemde,
    Ode,
}

impl Variant {
    pub const ALL: [Variant; 7] = [
        Variant::De,
        Variant::Mde,
        Variant::Mdevm,
        Variant::Emde,
        Variant::Oiemde,
        Variant::Oemde,
        Variant::Ode,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::De => "DE",
            Variant::Mde => "MDE",
            Variant::Mdevm => "MDEVM",
            Variant::Emde => "EMDE",
            Variant::Oiemde => "OIEMDE",
            Variant::Oemde => "OEMDE",
            Variant::Ode => "ODE",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Variant::De => "classic DE/rand/1/bin, fixed F, population 50",
            Variant::Mde => "micro DE/rand/1/bin, fixed F",
            Variant::Mdevm => "micro DE with vectorized random F",
            Variant::Emde => "ensemble micro DE (vectorized F, five-scheme pool)",
            Variant::Oiemde => "EMDE with opposition-based initialization",
            Variant::Oemde => "EMDE with opposition at initialization and every generation",
            Variant::Ode => "opposition-based DE, fixed F, jumping rate 0.3",
        }
    }

    /// Preset configuration at dimension `d`.
    pub fn config(self, d: usize) -> StrategyConfig {
        let rand1 = vec![MutationScheme::Rand1];
        let full = MutationScheme::ALL.to_vec();
        let (np, scale_factor_mode, scheme_pool, opposition) = match self {
            Variant::De => (
                CLASSIC_DE_NP,
                ScaleFactorMode::Fixed(FIXED_F),
                rand1,
                OppositionMode::Never,
            ),
            Variant::Mde => (
                DEFAULT_NP,
                ScaleFactorMode::Fixed(FIXED_F),
                rand1,
                OppositionMode::Never,
            ),
            Variant::Mdevm => (
                DEFAULT_NP,
                ScaleFactorMode::VectorizedRandom,
                rand1,
                OppositionMode::Never,
            ),
            Variant::Emde => (
                DEFAULT_NP,
                ScaleFactorMode::VectorizedRandom,
                full,
                OppositionMode::Never,
            ),
            Variant::Oiemde => (
                DEFAULT_NP,
                ScaleFactorMode::VectorizedRandom,
                full,
                OppositionMode::InitOnly,
            ),
            Variant::Oemde => (
                DEFAULT_NP,
                ScaleFactorMode::VectorizedRandom,
                full,
                OppositionMode::EveryGeneration,
            ),
            Variant::Ode => (
                DEFAULT_NP,
                ScaleFactorMode::Fixed(FIXED_F),
                rand1,
                OppositionMode::Probabilistic(ODE_JUMP_RATE),
            ),
        };
        StrategyConfig {
            np,
            cr: DEFAULT_CR,
            scale_factor_mode,
            scheme_pool,
            opposition,
            nfc_max: NFC_PER_DIMENSION * d as u64,
            evtr: DEFAULT_EVTR,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown variant {s:?}")))
    }
}

/// Looks up a preset by name and expands it for dimension `d`.
pub fn expand_preset(name: &str, d: usize) -> Result<StrategyConfig> {
    Ok(name.parse::<Variant>()?.config(d))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    ErrorReached,
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub problem: String,
    pub seed: u64,
    pub config: StrategyConfig,
    pub best_position: Vec<f64>,
    pub best_fitness: f64,
    pub final_error: f64,
    pub nfc_used: u64,
    pub generations: u64,
    pub terminated_by: Termination,
    #[serde(skip)]
    pub trace: ConvergenceTrace,
}

/// Step-wise driver of one run.
#[derive(Debug)]
pub struct Engine<'a> {
    problem: &'a Problem,
    config: StrategyConfig,
    rng: RngStream,
    budget: BudgetCounter,
    population: Population,
    best: Individual,
    trace: ConvergenceTrace,
}

impl<'a> Engine<'a> {
    /// Validates the configuration and runs the initialization phase,
    /// including the opposition merge when the mode asks for it.
    pub fn new(problem: &'a Problem, config: StrategyConfig, seed: u64) -> Result<Self> {
        config.validate()?;
        let mut rng = RngStream::new(seed);
        let mut budget = BudgetCounter::with_slack(config.nfc_max, config.overshoot_allowance());
        let mut population = init_population(problem, config.np, &mut rng, &mut budget)?;
        if config.opposition.at_init() {
            let opposites =
                opposite_population(&population, problem.bounds(), problem, &mut budget)?;
            population = merge_select_best(&population, &opposites)?;
        }
        let best = population.best()?.clone();
        let mut trace = ConvergenceTrace::new();
        trace.push(budget.nfc(), best.require_fitness()? - problem.vtr());
        Ok(Self {
            problem,
            config,
            rng,
            budget,
            population,
            best,
            trace,
        })
    }

    pub fn population(&self) -> &Population {
        &self.population
    }

    pub fn budget(&self) -> &BudgetCounter {
        &self.budget
    }

    pub fn config(&self) -> &StrategyConfig {
        &self.config
    }

    pub fn trace(&self) -> &ConvergenceTrace {
        &self.trace
    }

    pub fn best(&self) -> &Individual {
        &self.best
    }

    fn best_fitness(&self) -> f64 {
        self.best.fitness().expect("best is always evaluated")
    }

    /// The loop guard: `Some` once the error target is met or the budget is spent.
    pub fn termination(&self) -> Option<Termination> {
        if (self.best_fitness() - self.problem.vtr()).abs() <= self.config.evtr {
            Some(Termination::ErrorReached)
        } else if self.budget.exhausted() {
            Some(Termination::BudgetExhausted)
        } else {
            None
        }
    }

    fn observe(&mut self, candidate: &Individual) {
        let f = candidate
            .fitness()
            .expect("observed individuals are evaluated");
        if f < self.best_fitness() {
            self.best = candidate.clone();
            self.trace.push(self.budget.nfc(), f - self.problem.vtr());
        }
    }

    fn mutant(&mut self, i: usize, best_idx: usize) -> Result<Vec<f64>> {
        let np = self.population.len();
        let d = self.problem.dimension();
        let scheme = pick_scheme(&self.config.scheme_pool, &mut self.rng)?;
        let parent_idx = select_parents(np, i, scheme.parent_count(), &mut self.rng)?;
        let f = match self.config.scale_factor_mode {
            ScaleFactorMode::Fixed(f) => ScaleFactorVector::constant(d, f),
            ScaleFactorMode::VectorizedRandom => sample_scale_factors(d, &mut self.rng),
        };
        let parents: Vec<&[f64]> = parent_idx
            .iter()
            .map(|&k| self.population.get(k).position())
            .collect();
        let mut v = apply_mutation_scheme(
            scheme,
            self.population.get(i).position(),
            self.population.get(best_idx).position(),
            &parents,
            &f,
        )?;
        self.problem.bounds().clamp(&mut v);
        Ok(v)
    }

    /// Runs one full generation regardless of the loop guard.
    pub fn step(&mut self) -> Result<()> {
        let np = self.population.len();
        let best_idx = self.population.best_index()?;
        let mut survivors = Vec::with_capacity(np);
        for i in 0..np {
            let v = self.mutant(i, best_idx)?;
            let target = self.population.get(i);
            let u = crossover(target.position(), &v, self.config.cr, &mut self.rng);
            let trial = Individual::evaluate(self.problem, u, &mut self.budget)?;
            self.observe(&trial);
            let target = self.population.get(i);
            survivors.push(if trial.require_fitness()? <= target.require_fitness()? {
                trial
            } else {
                target.clone()
            });
        }
        let generation = self.population.generation() + 1;
        self.population = Population::new(survivors, generation);

        let jump = match self.config.opposition {
            OppositionMode::EveryGeneration => true,
            OppositionMode::Probabilistic(jr) => self.rng.uniform() < jr,
            OppositionMode::Never | OppositionMode::InitOnly => false,
        };
        if jump {
            let start = self.budget.nfc();
            let opposites = opposite_population(
                &self.population,
                self.problem.bounds(),
                self.problem,
                &mut self.budget,
            )?;
            // credit each improving opposite at the call that produced it
            for (k, m) in opposites.members().iter().enumerate() {
                let f = m.require_fitness()?;
                if f < self.best_fitness() {
                    self.best = m.clone();
                    self.trace
                        .push(start + k as u64 + 1, f - self.problem.vtr());
                }
            }
            self.population = merge_select_best(&self.population, &opposites)?;
        }

        let nfc = self.budget.nfc();
        if self.trace.last().is_none_or(|p| p.nfc != nfc) {
            self.trace
                .push(nfc, self.best_fitness() - self.problem.vtr());
        }
        Ok(())
    }

    /// Steps until the loop guard fires.
    pub fn run_to_end(mut self) -> Result<RunResult> {
        let terminated_by = loop {
            if let Some(t) = self.termination() {
                break t;
            }
            self.step()?;
        };
        let best_fitness = self.best_fitness();
        Ok(RunResult {
            problem: self.problem.name().to_string(),
            seed: self.rng.seed(),
            best_position: self.best.position().to_vec(),
            best_fitness,
            final_error: best_fitness - self.problem.vtr(),
            nfc_used: self.budget.nfc(),
            generations: self.population.generation(),
            terminated_by,
            trace: self.trace,
            config: self.config,
        })
    }
}

/// One complete optimization run.
pub fn run(problem: &Problem, config: &StrategyConfig, seed: u64) -> Result<RunResult> {
    Engine::new(problem, config.clone(), seed)?.run_to_end()
}
