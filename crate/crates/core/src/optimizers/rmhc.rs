use rand::Rng;

use super::{
    evaluate_pair, mutate_one_gene, Algorithm, ClimberConfig, GenerationRecord, Incumbent,
    OptResult,
};
use crate::evaluation::{Evaluator, NoisyFitness};
use crate::space::{Genome, ParamSpace};
use crate::Result;

/// Random mutation hill climber with incumbent re-evaluation. Runs until the
/// budget cannot pay for another generation.
pub fn rmhc_run<F, R>(
    space: &ParamSpace,
    oracle: &F,
    config: ClimberConfig,
    rng: &mut R,
) -> Result<OptResult>
where
    F: NoisyFitness + ?Sized,
    R: Rng + ?Sized,
{
    let initial = space.random_genome(rng);
    rmhc_from(space, oracle, config, initial, rng)
}

/// Like [`rmhc_run`] from a given starting genome.
pub fn rmhc_from<F, R>(
    space: &ParamSpace,
    oracle: &F,
    config: ClimberConfig,
    initial: Genome,
    rng: &mut R,
) -> Result<OptResult>
where
    F: NoisyFitness + ?Sized,
    R: Rng + ?Sized,
{
    config.check()?;
    space.validate(&initial)?;
    let mut eval = Evaluator::new(oracle, config.budget, config.run_seed).parallel(config.parallel);
    let mut result = OptResult::new(Algorithm::Rmhc, initial.clone(), *eval.ledger());
    let mut x = initial;
    let mut incumbent = Incumbent::default();
    let pair_cost = 2 * u64::from(config.resamples);

    while eval.ledger().remaining() >= pair_cost {
        let (y, _) = mutate_one_gene(&x, space, rng);
        let Some((fit_x, fit_y)) = evaluate_pair(&mut eval, &x, &y, config.resamples)? else {
            break;
        };
        let cmp = incumbent.compare(fit_x, fit_y);
        let parent = x.clone();
        let accepted = fit_y >= cmp.average_fitness;
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
            bandit: None,
        });
    }
    result.ledger = *eval.ledger();
    result.fitness_calls = eval.calls();
    Ok(result)
}
