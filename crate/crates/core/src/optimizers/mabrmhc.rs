//! Multi-armed bandit random mutation hill climber.
//!
//! Each dimension is a bandit whose arms are the dimension's legal values.
//! A generation picks the dimension with the largest urgency, then the arm
//! with the largest UCB score on the mean fitness change it produced, and
//! mutates the incumbent accordingly.
//!
//! `urgency_d = min_j (max_delta_d(j) + sqrt(2 ln L / n_d) + omega)`
//!
//! `arm*     = argmax_k (mean_delta_d(k) + sqrt(2 ln n_d / n_d(k)) + omega)`
//!
//! where `omega ~ U[0, 1e-6]` is redrawn for every term and `L` is selected
//! by [`UrgencyLog`]. Unvisited dimensions and arms score `+inf`; ties between
//! them are broken uniformly.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{
    evaluate_pair, Algorithm, BanditDecision, ClimberConfig, GenerationRecord, Incumbent, OptResult,
};
use crate::evaluation::{Evaluator, NoisyFitness};
use crate::space::{Genome, ParamSpace};
use crate::{Error, Result};

/// Upper bound of the tie-breaking noise.
pub const OMEGA_MAX: f64 = 1e-6;

/// Argument of the logarithm in the urgency exploration term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UrgencyLog {
    /// Total number of generations so far, across all dimensions.
    #[default]
    TotalPulls,
    /// Pulls of the dimension itself, so the term is `sqrt(2 ln n_d / n_d)`.
    DimensionPulls,
}

/// How the per-arm maximal fitness change is tracked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeltaMode {
    /// Largest signed change.
    #[default]
    Signed,
    /// Largest absolute change.
    Absolute,
}

impl std::str::FromStr for UrgencyLog {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "total" | "total-pulls" => Ok(UrgencyLog::TotalPulls),
            "dimension" | "dimension-pulls" => Ok(UrgencyLog::DimensionPulls),
            other => Err(Error::InvalidValue {
                key: "urgency_log".into(),
                message: format!("`{other}` (total | dimension)"),
            }),
        }
    }
}

impl std::str::FromStr for DeltaMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "signed" => Ok(DeltaMode::Signed),
            "absolute" | "abs" => Ok(DeltaMode::Absolute),
            other => Err(Error::InvalidValue {
                key: "delta_mode".into(),
                message: format!("`{other}` (signed | absolute)"),
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MabConfig {
    pub urgency_log: UrgencyLog,
    pub delta_mode: DeltaMode,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ArmStats {
    pub pulls: u64,
    /// Largest observed fitness change; 0 until the first observation.
    pub max_delta: f64,
    /// Running mean of observed fitness changes; 0 until the first observation.
    pub mean_delta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionStats {
    pub pulls: u64,
    pub arms: Vec<ArmStats>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BanditStats {
    pub dims: Vec<DimensionStats>,
    pub delta_mode: DeltaMode,
}

impl BanditStats {
    pub fn new(space: &ParamSpace, delta_mode: DeltaMode) -> Self {
        Self {
            dims: space
                .dims()
                .iter()
                .map(|d| DimensionStats {
                    pulls: 0,
                    arms: vec![ArmStats::default(); d.len()],
                })
                .collect(),
            delta_mode,
        }
    }

    pub fn total_pulls(&self) -> u64 {
        self.dims.iter().map(|d| d.pulls).sum()
    }

    /// Logs the fitness change observed after mutating dimension `dim` to `arm`.
    pub fn record(&mut self, dim: usize, arm: usize, delta: f64) {
        let tracked = match self.delta_mode {
            DeltaMode::Signed => delta,
            DeltaMode::Absolute => delta.abs(),
        };
        let d = &mut self.dims[dim];
        let a = &mut d.arms[arm];
        if a.pulls == 0 {
            a.max_delta = tracked;
            a.mean_delta = delta;
        } else {
            a.max_delta = a.max_delta.max(tracked);
            a.mean_delta += (delta - a.mean_delta) / (a.pulls + 1) as f64;
        }
        a.pulls += 1;
        d.pulls += 1;
    }
}

/// Urgency of `dim` with caller-supplied tie-breaking noise (one draw per arm).
pub fn urgency_with(
    stats: &BanditStats,
    dim: usize,
    log: UrgencyLog,
    omega: &mut impl FnMut() -> f64,
) -> f64 {
    let d = &stats.dims[dim];
    if d.pulls == 0 {
        return f64::INFINITY;
    }
    let log_arg = match log {
        UrgencyLog::TotalPulls => stats.total_pulls(),
        UrgencyLog::DimensionPulls => d.arms.iter().map(|a| a.pulls).sum(),
    };
    let exploration = (2.0 * (log_arg as f64).ln() / d.pulls as f64).sqrt();
    d.arms
        .iter()
        .map(|a| a.max_delta + exploration + omega())
        .fold(f64::INFINITY, f64::min)
}

pub fn urgency<R: Rng + ?Sized>(
    stats: &BanditStats,
    dim: usize,
    log: UrgencyLog,
    rng: &mut R,
) -> f64 {
    urgency_with(stats, dim, log, &mut || rng.gen_range(0.0..OMEGA_MAX))
}

/// Index of the largest score; infinite scores are tied and broken by a
/// separate uniform draw.
fn argmax_with_ties<R: Rng + ?Sized>(scores: &[f64], rng: &mut R) -> usize {
    let infinite: Vec<usize> = (0..scores.len())
        .filter(|&i| scores[i] == f64::INFINITY)
        .collect();
    if !infinite.is_empty() {
        return infinite[rng.gen_range(0..infinite.len())];
    }
    let mut best = 0;
    for i in 1..scores.len() {
        if scores[i] > scores[best] {
            best = i;
        }
    }
    best
}

/// Dimension to mutate, with every dimension's urgency.
pub fn select_dimension<R: Rng + ?Sized>(
    stats: &BanditStats,
    log: UrgencyLog,
    rng: &mut R,
) -> (usize, Vec<f64>) {
    let urgencies: Vec<f64> = (0..stats.dims.len())
        .map(|d| urgency(stats, d, log, rng))
        .collect();
    (argmax_with_ties(&urgencies, rng), urgencies)
}

/// UCB score of every arm of `dim` with caller-supplied noise.
pub fn arm_scores_with(
    stats: &BanditStats,
    dim: usize,
    omega: &mut impl FnMut() -> f64,
) -> Vec<f64> {
    let d = &stats.dims[dim];
    let log_n = (d.pulls as f64).ln();
    d.arms
        .iter()
        .map(|a| {
            if a.pulls == 0 {
                f64::INFINITY
            } else {
                a.mean_delta + (2.0 * log_n / a.pulls as f64).sqrt() + omega()
            }
        })
        .collect()
}

/// Arm to mutate to in `dim`; unvisited arms first.
pub fn select_arm_with<R: Rng + ?Sized>(
    stats: &BanditStats,
    dim: usize,
    omega: &mut impl FnMut() -> f64,
    rng: &mut R,
) -> usize {
    argmax_with_ties(&arm_scores_with(stats, dim, omega), rng)
}

pub fn select_arm<R: Rng + ?Sized>(stats: &BanditStats, dim: usize, rng: &mut R) -> usize {
    let scores = {
        let mut omega = || rng.gen_range(0.0..OMEGA_MAX);
        arm_scores_with(stats, dim, &mut omega)
    };
    argmax_with_ties(&scores, rng)
}

pub fn mabrmhc_run<F, R>(
    space: &ParamSpace,
    oracle: &F,
    config: ClimberConfig,
    mab: MabConfig,
    rng: &mut R,
) -> Result<OptResult>
where
    F: NoisyFitness + ?Sized,
    R: Rng + ?Sized,
{
    let initial = space.random_genome(rng);
    mabrmhc_from(space, oracle, config, mab, initial, rng).map(|(r, _)| r)
}

/// Like [`mabrmhc_run`] from a given start, also returning the final bandit statistics.
pub fn mabrmhc_from<F, R>(
    space: &ParamSpace,
    oracle: &F,
    config: ClimberConfig,
    mab: MabConfig,
    initial: Genome,
    rng: &mut R,
) -> Result<(OptResult, BanditStats)>
where
    F: NoisyFitness + ?Sized,
    R: Rng + ?Sized,
{
    config.check()?;
    space.validate(&initial)?;
    let mut eval = Evaluator::new(oracle, config.budget, config.run_seed).parallel(config.parallel);
    let mut result = OptResult::new(Algorithm::Mabrmhc, initial.clone(), *eval.ledger());
    let mut stats = BanditStats::new(space, mab.delta_mode);
    let mut x = initial;
    let mut incumbent = Incumbent::default();
    let pair_cost = 2 * u64::from(config.resamples);

    while eval.ledger().remaining() >= pair_cost {
        let (dim, urgencies) = select_dimension(&stats, mab.urgency_log, rng);
        let arm = select_arm(&stats, dim, rng);
        let mut y = x.clone();
        y.0[dim] = arm;
        let Some((fit_x, fit_y)) = evaluate_pair(&mut eval, &x, &y, config.resamples)? else {
            break;
        };
        let cmp = incumbent.compare(fit_x, fit_y);
        stats.record(dim, arm, cmp.delta);
        let parent = x.clone();
        let accepted = cmp.delta >= 0.0;
        if accepted {
            x = y.clone();
            incumbent.accept(fit_y);
        } else {
            incumbent.reject(&cmp);
        }
        result.push(GenerationRecord {
            generation: result.generations.len() as u64 + 1,
            games_consumed: eval.ledger().games_played,
            parent,
            offspring: y,
            genome: x.clone(),
            fit_x,
            fit_y,
            average_fitness: cmp.average_fitness,
            accepted,
            best_fit_so_far: incumbent.best_fit_so_far,
            m: incumbent.m,
            bandit: Some(BanditDecision {
                dim,
                arm,
                urgencies,
            }),
        });
    }
    result.ledger = *eval.ledger();
    result.fitness_calls = eval.calls();
    Ok((result, stats))
}
