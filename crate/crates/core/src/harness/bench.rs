use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::game::{Action, GameParams, GameState, Player};
use crate::seeds;
use crate::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub games: u64,
    pub ticks: u64,
    pub seconds: f64,
    pub ticks_per_second: f64,
}

/// Times raw forward-model steps over `games` full games with pre-drawn
/// random actions, so agent cost is excluded.
pub fn bench(params: GameParams, games: u64, seed: u64) -> Result<BenchReport> {
    let mut rng = seeds::rng(seed);
    let mut ticks = 0u64;
    let mut seconds = 0.0;
    for g in 0..games {
        let actions: Vec<[Action; 2]> = (0..crate::game::MAX_TICKS)
            .map(|_| [Action::random(&mut rng), Action::random(&mut rng)])
            .collect();
        let mut state = GameState::new(params, seeds::derive(&[seed, g]));
        let start = Instant::now();
        for &[a, b] in &actions {
            state.step(a, b)?;
        }
        seconds += start.elapsed().as_secs_f64();
        ticks += u64::from(state.tick);
        std::hint::black_box(state.score(Player::P1));
    }
    Ok(BenchReport {
        games,
        ticks,
        seconds,
        ticks_per_second: ticks as f64 / seconds.max(f64::MIN_POSITIVE),
    })
}
