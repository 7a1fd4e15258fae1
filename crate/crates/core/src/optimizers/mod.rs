//! Noisy discrete hill climbers.
//!
//! Both climbers keep a single incumbent `x` and, every generation, evaluate
//! the incumbent and one offspring `y` with `r` resamples each. The incumbent's
//! fitness estimate is the running mean of all its re-evaluations since it was
//! last accepted (`best_fit_so_far` over `m` samples); the offspring replaces
//! it when its single estimate is at least that mean.

mod mabrmhc;
mod rmhc;
pub mod surrogate;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::evaluation::{BudgetLedger, Evaluator, NoisyFitness};
use crate::space::{Genome, ParamSpace};
use crate::{Error, Result};

pub use mabrmhc::{
    arm_scores_with, mabrmhc_from, mabrmhc_run, select_arm, select_arm_with, select_dimension,
    urgency, urgency_with, ArmStats, BanditStats, DeltaMode, DimensionStats, MabConfig, UrgencyLog,
    OMEGA_MAX,
};
pub use rmhc::{rmhc_from, rmhc_run};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Rmhc,
    Mabrmhc,
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rmhc" => Ok(Algorithm::Rmhc),
            "mabrmhc" => Ok(Algorithm::Mabrmhc),
            other => Err(Error::InvalidValue {
                key: "algo".into(),
                message: format!("unknown algorithm `{other}` (rmhc | mabrmhc)"),
            }),
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Algorithm::Rmhc => "rmhc",
            Algorithm::Mabrmhc => "mabrmhc",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClimberConfig {
    /// Games per fitness call (`r`).
    pub resamples: u32,
    /// Total games the run may consume.
    pub budget: u64,
    /// Seeds the per-call resample schedule.
    pub run_seed: u64,
    /// Evaluate the resamples of a call on the rayon pool.
    pub parallel: bool,
}

impl ClimberConfig {
    pub fn new(resamples: u32, budget: u64, run_seed: u64) -> Self {
        Self {
            resamples,
            budget,
            run_seed,
            parallel: false,
        }
    }

    fn check(&self) -> Result<()> {
        if self.resamples == 0 {
            return Err(Error::ZeroResamples);
        }
        let needed = 2 * u64::from(self.resamples);
        if self.budget < needed {
            return Err(Error::BudgetTooSmall {
                budget: self.budget,
                needed,
            });
        }
        Ok(())
    }
}

/// Incumbent bookkeeping shared by both climbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Incumbent {
    pub best_fit_so_far: f64,
    /// Number of samples averaged into `best_fit_so_far`.
    pub m: u32,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Comparison {
    /// `(best_fit_so_far * m + fit_x) / (m + 1)`
    pub average_fitness: f64,
    /// `fit_y - average_fitness`
    pub delta: f64,
}

impl Incumbent {
    pub fn compare(&self, fit_x: f64, fit_y: f64) -> Comparison {
        let m = f64::from(self.m);
        let average_fitness = (self.best_fit_so_far * m + fit_x) / (m + 1.0);
        Comparison {
            average_fitness,
            delta: fit_y - average_fitness,
        }
    }

    pub fn accept(&mut self, fit_y: f64) {
        self.best_fit_so_far = fit_y;
        self.m = 1;
    }

    pub fn reject(&mut self, comparison: &Comparison) {
        self.best_fit_so_far = comparison.average_fitness;
        self.m += 1;
    }
}

/// Choice made by the bandit layer of MABRMHC in one generation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BanditDecision {
    pub dim: usize,
    pub arm: usize,
    /// Urgency of every dimension; `null` in JSON for unvisited (infinite) ones.
    pub urgencies: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub generation: u64,
    /// Games consumed by the run after this generation.
    pub games_consumed: u64,
    pub parent: Genome,
    pub offspring: Genome,
    /// Incumbent after the update.
    pub genome: Genome,
    pub fit_x: f64,
    pub fit_y: f64,
    pub average_fitness: f64,
    pub accepted: bool,
    pub best_fit_so_far: f64,
    pub m: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bandit: Option<BanditDecision>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub algorithm: Algorithm,
    pub initial: Genome,
    pub recommendation: Genome,
    /// `(games_consumed, best_fit_so_far)` after every generation.
    pub fitness_history: Vec<(u64, f64)>,
    /// Incumbent after every generation.
    pub recommendation_history: Vec<Genome>,
    pub generations: Vec<GenerationRecord>,
    pub ledger: BudgetLedger,
    pub fitness_calls: u64,
}

impl OptResult {
    fn new(algorithm: Algorithm, initial: Genome, ledger: BudgetLedger) -> Self {
        Self {
            algorithm,
            recommendation: initial.clone(),
            initial,
            fitness_history: Vec::new(),
            recommendation_history: Vec::new(),
            generations: Vec::new(),
            ledger,
            fitness_calls: 0,
        }
    }

    fn push(&mut self, record: GenerationRecord) {
        self.fitness_history
            .push((record.games_consumed, record.best_fit_so_far));
        self.recommendation_history.push(record.genome.clone());
        self.recommendation = record.genome.clone();
        self.generations.push(record);
    }

    /// Games consumed when the incumbent first satisfied `pred`.
    pub fn games_to_first(&self, mut pred: impl FnMut(&Genome) -> bool) -> Option<u64> {
        self.generations
            .iter()
            .find(|g| pred(&g.genome))
            .map(|g| g.games_consumed)
    }
}

/// Replaces one uniformly chosen gene by a uniform draw over all of its
/// dimension's values (the draw may repeat the current value). Returns the
/// offspring and the mutated dimension.
pub fn mutate_one_gene<R: Rng + ?Sized>(
    x: &Genome,
    space: &ParamSpace,
    rng: &mut R,
) -> (Genome, usize) {
    let d = rng.gen_range(0..space.len());
    let mut y = x.clone();
    y.0[d] = rng.gen_range(0..space.arity(d));
    (y, d)
}

/// Evaluates parent and offspring, or returns `None` once the budget refuses.
fn evaluate_pair<F: NoisyFitness + ?Sized>(
    eval: &mut Evaluator<'_, F>,
    x: &Genome,
    y: &Genome,
    resamples: u32,
) -> Result<Option<(f64, f64)>> {
    let stop = |e: Error| match e {
        Error::BudgetExhausted { .. } => Ok(None),
        other => Err(other),
    };
    let fit_x = match eval.fitness(x, resamples) {
        Ok(r) => r.value,
        Err(e) => return stop(e),
    };
    let fit_y = match eval.fitness(y, resamples) {
        Ok(r) => r.value,
        Err(e) => return stop(e),
    };
    Ok(Some((fit_x, fit_y)))
}
