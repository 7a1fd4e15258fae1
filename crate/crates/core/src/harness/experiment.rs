use std::collections::HashMap;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ExperimentConfig, AUDIT_TAG, TRIAL_TAG};
use crate::evaluation::{audit, mean_and_se, GameFitness};
use crate::optimizers::{
    mabrmhc_run, rmhc_run, Algorithm, ClimberConfig, GenerationRecord, OptResult,
};
use crate::seeds;
use crate::space::{genome_text, Genome};
use crate::Result;

/// Final state of one optimizer run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub trial: u32,
    pub run_seed: u64,
    #[serde(with = "genome_text")]
    pub initial: Genome,
    #[serde(with = "genome_text")]
    pub recommendation: Genome,
    pub generations: u64,
    pub games_consumed: u64,
    pub best_fit_so_far: f64,
    /// Audited win rate of the recommendation; empty when audits are off.
    pub audited: Option<f64>,
    pub audited_se: Option<f64>,
}

/// Across-trial mean and standard error after one generation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub generation: u64,
    pub games_consumed: u64,
    pub trials: usize,
    pub best_fit_mean: f64,
    pub best_fit_se: f64,
    /// Audited win rate of the incumbents; empty when audits are off.
    pub quality_mean: Option<f64>,
    pub quality_se: Option<f64>,
}

/// One line of the run log.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialLog {
    pub trial: u32,
    #[serde(flatten)]
    pub record: GenerationRecord,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub audited: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentOutput {
    pub trials: Vec<TrialSummary>,
    pub curves: Vec<CurvePoint>,
    pub log: Vec<TrialLog>,
    pub results: Vec<OptResult>,
}

/// Audit estimates shared by all trials. An audit is a fixed function of the
/// genome, so caching never changes a value.
struct AuditCache<'a> {
    oracle: &'a GameFitness,
    games: u32,
    seed: u64,
    known: Mutex<HashMap<Genome, (f64, f64)>>,
}

impl AuditCache<'_> {
    fn get(&self, genome: &Genome) -> Result<(f64, f64)> {
        if let Some(&hit) = self.known.lock().expect("audit cache poisoned").get(genome) {
            return Ok(hit);
        }
        let value = audit(self.oracle, genome, self.games, self.seed, false)?;
        self.known
            .lock()
            .expect("audit cache poisoned")
            .insert(genome.clone(), value);
        Ok(value)
    }
}

/// Runs `config.trials` independent optimizations of `p1`'s win rate.
/// When `audit_history` is set every incumbent is audited, otherwise only the
/// final recommendations are (no audits at all if `audit_games` is 0).
pub fn optimize_experiment(
    config: &ExperimentConfig,
    audit_history: bool,
) -> Result<ExperimentOutput> {
    config.validate()?;
    let space = config.space();
    let oracle = GameFitness {
        physics: config.physics,
        ..GameFitness::new(space.clone(), config.p1, config.p2)
    };
    let cache = (config.audit_games > 0).then(|| AuditCache {
        oracle: &oracle,
        games: config.audit_games,
        seed: seeds::derive(&[config.seed, AUDIT_TAG]),
        known: Mutex::new(HashMap::new()),
    });

    let results: Vec<OptResult> = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let run_seed = seeds::derive(&[config.seed, TRIAL_TAG, u64::from(t)]);
            let mut rng = seeds::rng(seeds::derive(&[run_seed, 1]));
            let climber = ClimberConfig {
                parallel: true,
                ..ClimberConfig::new(config.resamples, config.budget, run_seed)
            };
            match config.algorithm {
                Algorithm::Rmhc => rmhc_run(&space, &oracle, climber, &mut rng),
                Algorithm::Mabrmhc => mabrmhc_run(&space, &oracle, climber, config.mab, &mut rng),
            }
        })
        .collect::<Result<_>>()?;

    let audited: Vec<Vec<Option<f64>>> = results
        .par_iter()
        .map(|res| {
            let n = res.generations.len();
            res.generations
                .iter()
                .enumerate()
                .map(|(k, g)| match &cache {
                    Some(c) if audit_history || k + 1 == n => {
                        c.get(&g.genome).map(|(m, _)| Some(m))
                    }
                    _ => Ok(None),
                })
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;

    let mut trials = Vec::with_capacity(results.len());
    let mut log = Vec::new();
    for (t, (res, quality)) in results.iter().zip(&audited).enumerate() {
        let final_audit = match &cache {
            Some(c) => Some(c.get(&res.recommendation)?),
            None => None,
        };
        trials.push(TrialSummary {
            trial: t as u32,
            run_seed: seeds::derive(&[config.seed, TRIAL_TAG, t as u64]),
            initial: res.initial.clone(),
            recommendation: res.recommendation.clone(),
            generations: res.generations.len() as u64,
            games_consumed: res.ledger.games_played,
            best_fit_so_far: res
                .generations
                .last()
                .map_or(f64::NAN, |g| g.best_fit_so_far),
            audited: final_audit.map(|a| a.0),
            audited_se: final_audit.map(|a| a.1),
        });
        log.extend(res.generations.iter().zip(quality).map(|(g, &q)| TrialLog {
            trial: t as u32,
            record: g.clone(),
            audited: q,
        }));
    }

    Ok(ExperimentOutput {
        curves: curves(&results, &audited),
        trials,
        log,
        results,
    })
}

fn curves(results: &[OptResult], audited: &[Vec<Option<f64>>]) -> Vec<CurvePoint> {
    let longest = results
        .iter()
        .map(|r| r.generations.len())
        .max()
        .unwrap_or(0);
    (0..longest)
        .map(|k| {
            let present: Vec<(&GenerationRecord, Option<f64>)> = results
                .iter()
                .zip(audited)
                .filter_map(|(r, q)| r.generations.get(k).map(|g| (g, q[k])))
                .collect();
            let best: Vec<f64> = present.iter().map(|(g, _)| g.best_fit_so_far).collect();
            let quality: Option<Vec<f64>> = present.iter().map(|(_, q)| *q).collect();
            let (best_fit_mean, best_fit_se) = mean_and_se(&best);
            let q = quality.map(|q| mean_and_se(&q));
            CurvePoint {
                generation: k as u64,
                games_consumed: present[0].0.games_consumed,
                trials: present.len(),
                best_fit_mean,
                best_fit_se,
                quality_mean: q.map(|q| q.0),
                quality_se: q.map(|q| q.1),
            }
        })
        .collect()
}
