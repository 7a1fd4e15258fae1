use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::Agent;
use crate::game::{Action, GameState, Player};

/// Uniform over the five actions; the state is ignored.
pub fn random_act<R: Rng + ?Sized>(_state: &GameState, _me: Player, rng: &mut R) -> Action {
    Action::random(rng)
}

pub struct RandomAgent {
    rng: ChaCha8Rng,
}

impl RandomAgent {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: crate::seeds::rng(seed),
        }
    }
}

impl Agent for RandomAgent {
    fn act(&mut self, state: &GameState, me: Player) -> Action {
        random_act(state, me, &mut self.rng)
    }
}
