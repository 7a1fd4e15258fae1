use proptest::prelude::*;
use skilldepth::evaluation::NoisyFitness;
use skilldepth::optimizers::surrogate::OneMax;
use skilldepth::optimizers::{
    mabrmhc_from, rmhc_from, BanditStats, ClimberConfig, DeltaMode, GenerationRecord, MabConfig,
    OptResult, UrgencyLog,
};
use skilldepth::{seeds, Genome, ParamSpace, Result};

/// Fitness drawn from a small lattice so that ties with the incumbent's
/// average are frequent. Pure in `(genome, seed)`.
struct Lattice;

impl NoisyFitness for Lattice {
    fn sample(&self, genome: &Genome, seed: u64) -> Result<f64> {
        let mut words = genome.words().collect::<Vec<_>>();
        words.push(seed);
        Ok((seeds::derive(&words) % 5) as f64 / 4.0)
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// Replays a run's transcript with the textbook incumbent-averaging rules,
/// keeping every sample attributed to the incumbent.
fn replay(
    result: &OptResult,
    accept: impl Fn(&GenerationRecord) -> bool,
) -> Result<(), TestCaseError> {
    let mut samples: Vec<f64> = Vec::new();
    let mut x = result.initial.clone();
    for rec in &result.generations {
        prop_assert_eq!(&rec.parent, &x);
        let expected_avg = (samples.iter().sum::<f64>() + rec.fit_x) / (samples.len() as f64 + 1.0);
        prop_assert!(
            close(rec.average_fitness, expected_avg),
            "{} vs {}",
            rec.average_fitness,
            expected_avg
        );
        prop_assert_eq!(rec.accepted, accept(rec));
        if rec.accepted {
            samples = vec![rec.fit_y];
            x = rec.offspring.clone();
        } else {
            samples.push(rec.fit_x);
        }
        prop_assert_eq!(&rec.genome, &x);
        prop_assert_eq!(rec.m as usize, samples.len());
        let mean = samples.iter().sum::<f64>() / samples.len() as f64;
        prop_assert!(
            close(rec.best_fit_so_far, mean),
            "{} vs {}",
            rec.best_fit_so_far,
            mean
        );
        prop_assert!(rec.parent.hamming(&rec.offspring) <= 1);
    }
    prop_assert_eq!(&result.recommendation, &x);
    Ok(())
}

fn check_bookkeeping(
    result: &OptResult,
    space: &ParamSpace,
    config: ClimberConfig,
) -> Result<(), TestCaseError> {
    let r = u64::from(config.resamples);
    let generations = config.budget / (2 * r);
    prop_assert_eq!(result.generations.len() as u64, generations);
    prop_assert_eq!(result.fitness_calls, 2 * generations);
    prop_assert_eq!(result.ledger.games_played, r * result.fitness_calls);
    prop_assert!(result.ledger.games_played <= config.budget);
    prop_assert!(result
        .generations
        .windows(2)
        .all(|w| w[0].games_consumed < w[1].games_consumed));
    for rec in &result.generations {
        space.validate(&rec.offspring).unwrap();
        space.validate(&rec.genome).unwrap();
        prop_assert!((0.0..=1.0).contains(&rec.fit_x) && (0.0..=1.0).contains(&rec.fit_y));
    }
    if let Some(last) = result.recommendation_history.last() {
        prop_assert_eq!(last, &result.recommendation);
    }
    Ok(())
}

fn space_and_start() -> impl Strategy<Value = (ParamSpace, Genome)> {
    prop_oneof![
        Just(ParamSpace::binary(5).unwrap()),
        Just(ParamSpace::game_5d())
    ]
    .prop_flat_map(|space| {
        let genes: Vec<_> = (0..space.len()).map(|d| 0..space.arity(d)).collect();
        (Just(space), genes.prop_map(Genome))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rmhc_follows_the_acceptance_rule(
        (space, start) in space_and_start(),
        r in 1u32..4,
        budget in 2u64..200,
        seed in any::<u64>(),
    ) {
        prop_assume!(budget >= 2 * u64::from(r));
        let config = ClimberConfig::new(r, budget, seed);
        let result = rmhc_from(&space, &Lattice, config, start, &mut seeds::rng(seed ^ 1)).unwrap();
        replay(&result, |rec| rec.fit_y >= rec.average_fitness)?;
        check_bookkeeping(&result, &space, config)?;
    }

    #[test]
    fn mabrmhc_follows_the_acceptance_rule(
        (space, start) in space_and_start(),
        r in 1u32..4,
        budget in 2u64..200,
        seed in any::<u64>(),
        verbatim in any::<bool>(),
        absolute in any::<bool>(),
    ) {
        prop_assume!(budget >= 2 * u64::from(r));
        let config = ClimberConfig::new(r, budget, seed);
        let mab = MabConfig {
            urgency_log: if verbatim { UrgencyLog::DimensionPulls } else { UrgencyLog::TotalPulls },
            delta_mode: if absolute { DeltaMode::Absolute } else { DeltaMode::Signed },
        };
        let (result, stats) = mabrmhc_from(&space, &Lattice, config, mab, start, &mut seeds::rng(seed ^ 1)).unwrap();
        replay(&result, |rec| rec.fit_y - rec.average_fitness >= 0.0)?;
        check_bookkeeping(&result, &space, config)?;

        // Rebuild the bandit statistics from the logged decisions.
        let mut logged: Vec<Vec<Vec<f64>>> = (0..space.len()).map(|d| vec![Vec::new(); space.arity(d)]).collect();
        for rec in &result.generations {
            let b = rec.bandit.as_ref().unwrap();
            prop_assert_eq!(rec.offspring.0[b.dim], b.arm);
            prop_assert_eq!(b.urgencies.len(), space.len());
            logged[b.dim][b.arm].push(rec.fit_y - rec.average_fitness);
        }
        prop_assert_eq!(stats.total_pulls(), result.generations.len() as u64);
        for (d, dim) in stats.dims.iter().enumerate() {
            prop_assert_eq!(dim.pulls, dim.arms.iter().map(|a| a.pulls).sum::<u64>());
            for (k, arm) in dim.arms.iter().enumerate() {
                let deltas = &logged[d][k];
                prop_assert_eq!(arm.pulls as usize, deltas.len());
                if deltas.is_empty() {
                    prop_assert_eq!((arm.max_delta, arm.mean_delta), (0.0, 0.0));
                    continue;
                }
                let mean = deltas.iter().sum::<f64>() / deltas.len() as f64;
                let tracked = deltas.iter().map(|&x| if absolute { x.abs() } else { x });
                let max = tracked.fold(f64::NEG_INFINITY, f64::max);
                prop_assert!(close(arm.mean_delta, mean));
                prop_assert_eq!(arm.max_delta, max);
                if !absolute {
                    prop_assert!(arm.max_delta >= arm.mean_delta - 1e-12);
                }
            }
        }
    }

    #[test]
    fn bandit_record_matches_recomputation(
        events in prop::collection::vec((0usize..5, 0usize..2, -1.0f64..1.0), 1..60),
    ) {
        let space = ParamSpace::binary(5).unwrap();
        let mut stats = BanditStats::new(&space, DeltaMode::Signed);
        for (i, &(d, k, delta)) in events.iter().enumerate() {
            stats.record(d, k, delta);
            let seen: Vec<f64> = events[..=i].iter().filter(|e| e.0 == d && e.1 == k).map(|e| e.2).collect();
            let arm = &stats.dims[d].arms[k];
            prop_assert_eq!(arm.pulls as usize, seen.len());
            prop_assert!(close(arm.mean_delta, seen.iter().sum::<f64>() / seen.len() as f64));
            prop_assert_eq!(arm.max_delta, seen.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
            prop_assert_eq!(stats.dims[d].pulls, stats.dims[d].arms.iter().map(|a| a.pulls).sum::<u64>());
        }
        prop_assert_eq!(stats.total_pulls(), events.len() as u64);
    }
}

#[test]
fn onemax_runs_end_on_the_last_incumbent() {
    let space = ParamSpace::binary(5).unwrap();
    for seed in 0..20 {
        let config = ClimberConfig::new(1, 100, seed);
        let start = Genome(vec![0; 5]);
        let result = rmhc_from(&space, &OneMax, config, start, &mut seeds::rng(seed)).unwrap();
        assert_eq!(
            result.recommendation,
            result.generations.last().unwrap().genome
        );
        assert_eq!(result.fitness_history.len(), 50);
    }
}
