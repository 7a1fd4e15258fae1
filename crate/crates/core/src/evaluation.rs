//! Matches between agents and the resampled win-rate fitness built on them.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::agents::{Agent, AgentSpec};
use crate::game::trace::TraceRecord;
use crate::game::{
    params_from_genome, GameOutcome, GameParams, GameState, Physics, Player, Verdict,
};
use crate::seeds;
use crate::space::{Genome, ParamSpace};
use crate::{Error, Result};

/// Outcome of one game from player 1's point of view.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GameValue {
    Loss,
    Draw,
    Win,
}

impl GameValue {
    pub fn value(self) -> f64 {
        match self {
            GameValue::Loss => 0.0,
            GameValue::Draw => 0.5,
            GameValue::Win => 1.0,
        }
    }

    pub fn from_outcome(outcome: &GameOutcome) -> Self {
        match outcome.verdict {
            Verdict::P1Win => GameValue::Win,
            Verdict::P2Win => GameValue::Loss,
            Verdict::Draw => GameValue::Draw,
        }
    }

    pub fn mirrored(self) -> Self {
        match self {
            GameValue::Loss => GameValue::Win,
            GameValue::Draw => GameValue::Draw,
            GameValue::Win => GameValue::Loss,
        }
    }
}

/// Every random stream a match consumes, indexed by player slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MatchSeeds {
    pub engine: [u64; 2],
    pub agents: [u64; 2],
}

impl MatchSeeds {
    pub fn from_seed(seed: u64) -> Self {
        Self {
            engine: GameState::engine_seeds(seed),
            agents: [seeds::derive(&[seed, 2]), seeds::derive(&[seed, 3])],
        }
    }

    /// Seeds for the same match with the two player slots swapped.
    pub fn mirrored(self) -> Self {
        Self {
            engine: [self.engine[1], self.engine[0]],
            agents: [self.agents[1], self.agents[0]],
        }
    }
}

/// Runs a game to completion, calling `observe` after every tick.
pub fn run_agents(
    mut state: GameState,
    agents: [&mut dyn Agent; 2],
    mut observe: impl FnMut(&GameState, [crate::game::Action; 2]),
) -> Result<GameOutcome> {
    let [a, b] = agents;
    while !state.is_over() {
        let actions = [a.act(&state, Player::P1), b.act(&state, Player::P2)];
        state.step(actions[0], actions[1])?;
        observe(&state, actions);
    }
    state.outcome()
}

pub fn play_match(
    params: GameParams,
    physics: Physics,
    p1: &AgentSpec,
    p2: &AgentSpec,
    seeds: MatchSeeds,
) -> Result<GameOutcome> {
    let mut a = p1.build(seeds.agents[0])?;
    let mut b = p2.build(seeds.agents[1])?;
    run_agents(
        GameState::with_physics(params, physics, seeds.engine),
        [a.as_mut(), b.as_mut()],
        |_, _| {},
    )
}

/// Like [`play_match`], also returning one trace record per tick.
pub fn play_traced(
    params: GameParams,
    physics: Physics,
    p1: &AgentSpec,
    p2: &AgentSpec,
    seeds: MatchSeeds,
) -> Result<(GameOutcome, Vec<TraceRecord>)> {
    let mut a = p1.build(seeds.agents[0])?;
    let mut b = p2.build(seeds.agents[1])?;
    let mut trace = Vec::with_capacity(crate::game::MAX_TICKS as usize);
    let outcome = run_agents(
        GameState::with_physics(params, physics, seeds.engine),
        [a.as_mut(), b.as_mut()],
        |s, actions| trace.push(TraceRecord::capture(s, actions)),
    )?;
    Ok((outcome, trace))
}

/// One 500-tick game with default physics.
pub fn play_game(
    params: GameParams,
    p1: &AgentSpec,
    p2: &AgentSpec,
    seed: u64,
) -> Result<GameValue> {
    play_match(
        params,
        Physics::default(),
        p1,
        p2,
        MatchSeeds::from_seed(seed),
    )
    .map(|o| GameValue::from_outcome(&o))
}

/// A stochastic objective over genomes. `sample` must be a pure function of
/// its arguments.
pub trait NoisyFitness: Sync {
    fn sample(&self, genome: &Genome, seed: u64) -> Result<f64>;
}

/// Win rate of `p1` against `p2` on the game a genome encodes.
#[derive(Clone, Debug)]
pub struct GameFitness {
    pub space: ParamSpace,
    pub p1: AgentSpec,
    pub p2: AgentSpec,
    pub physics: Physics,
}

impl GameFitness {
    pub fn new(space: ParamSpace, p1: AgentSpec, p2: AgentSpec) -> Self {
        Self {
            space,
            p1,
            p2,
            physics: Physics::default(),
        }
    }
}

impl NoisyFitness for GameFitness {
    fn sample(&self, genome: &Genome, seed: u64) -> Result<f64> {
        let params = params_from_genome(&self.space, genome)?;
        let outcome = play_match(
            params,
            self.physics,
            &self.p1,
            &self.p2,
            MatchSeeds::from_seed(seed),
        )?;
        Ok(GameValue::from_outcome(&outcome).value())
    }
}

/// Games played against the optimization budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetLedger {
    pub games_played: u64,
    pub games_allowed: u64,
}

impl BudgetLedger {
    pub fn new(games_allowed: u64) -> Self {
        Self {
            games_played: 0,
            games_allowed,
        }
    }

    pub fn remaining(&self) -> u64 {
        self.games_allowed - self.games_played
    }

    /// Books `games`, or refuses without booking anything.
    pub fn charge(&mut self, games: u64) -> Result<()> {
        if games > self.remaining() {
            return Err(Error::BudgetExhausted {
                requested: games,
                remaining: self.remaining(),
            });
        }
        self.games_played += games;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitnessReport {
    pub genome: Genome,
    pub resamples: u32,
    /// Mean of the `resamples` samples.
    pub value: f64,
    pub games_consumed: u64,
}

/// Mean of `seeds.len()` samples, summed in seed order so the result does not
/// depend on whether the samples ran in parallel.
pub fn mean_sample<F: NoisyFitness + ?Sized>(
    oracle: &F,
    genome: &Genome,
    seeds: &[u64],
    parallel: bool,
) -> Result<f64> {
    let samples: Vec<f64> = if parallel {
        seeds
            .par_iter()
            .map(|&s| oracle.sample(genome, s))
            .collect::<Result<_>>()?
    } else {
        seeds
            .iter()
            .map(|&s| oracle.sample(genome, s))
            .collect::<Result<_>>()?
    };
    Ok(samples.iter().sum::<f64>() / samples.len() as f64)
}

/// Resampled fitness with budget accounting.
///
/// The seed of resample `i` during the `n`-th call is
/// `derive(run_seed, n, genome, i)`: reproducible for a run, and independent
/// across repeated evaluations of the same genome.
pub struct Evaluator<'a, F: ?Sized> {
    oracle: &'a F,
    ledger: BudgetLedger,
    run_seed: u64,
    calls: u64,
    parallel: bool,
}

impl<'a, F: NoisyFitness + ?Sized> Evaluator<'a, F> {
    pub fn new(oracle: &'a F, budget: u64, run_seed: u64) -> Self {
        Self {
            oracle,
            ledger: BudgetLedger::new(budget),
            run_seed,
            calls: 0,
            parallel: false,
        }
    }

    /// Run the resamples of each call on the rayon pool.
    pub fn parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    pub fn ledger(&self) -> &BudgetLedger {
        &self.ledger
    }

    pub fn calls(&self) -> u64 {
        self.calls
    }

    pub fn fitness(&mut self, genome: &Genome, resamples: u32) -> Result<FitnessReport> {
        if resamples == 0 {
            return Err(Error::ZeroResamples);
        }
        if u64::from(resamples) > self.ledger.remaining() {
            return Err(Error::BudgetExhausted {
                requested: resamples.into(),
                remaining: self.ledger.remaining(),
            });
        }
        let mut words = Vec::with_capacity(genome.len() + 4);
        words.extend([self.run_seed, self.calls, u64::from(resamples)]);
        words.extend(genome.words());
        let seeds: Vec<u64> = (0..u64::from(resamples))
            .map(|i| {
                words.push(i);
                let s = seeds::derive(&words);
                words.pop();
                s
            })
            .collect();
        let value = mean_sample(self.oracle, genome, &seeds, self.parallel)?;
        self.ledger.charge(resamples.into())?;
        self.calls += 1;
        Ok(FitnessReport {
            genome: genome.clone(),
            resamples,
            value,
            games_consumed: resamples.into(),
        })
    }
}

/// Mean and standard error of `n` samples outside any budget. Seeds depend
/// only on `(seed, genome, i)`, so the estimate is a fixed function of the
/// genome for a given `seed`.
pub fn audit<F: NoisyFitness + ?Sized>(
    oracle: &F,
    genome: &Genome,
    n: u32,
    seed: u64,
    parallel: bool,
) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::ZeroResamples);
    }
    let seeds: Vec<u64> = (0..u64::from(n))
        .map(|i| {
            let mut words = vec![seed];
            words.extend(genome.words());
            words.push(i);
            seeds::derive(&words)
        })
        .collect();
    let samples: Vec<f64> = if parallel {
        seeds
            .par_iter()
            .map(|&s| oracle.sample(genome, s))
            .collect::<Result<_>>()?
    } else {
        seeds
            .iter()
            .map(|&s| oracle.sample(genome, s))
            .collect::<Result<_>>()?
    };
    Ok(mean_and_se(&samples))
}

/// Sample mean and standard error (sample SD over sqrt(n)); SE is 0 for n < 2.
pub fn mean_and_se(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    if samples.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
