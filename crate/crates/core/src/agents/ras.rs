use super::Agent;
use crate::game::{Action, GameState, Player};

/// Fires whenever the cooldown allows, otherwise rotates clockwise.
pub fn ras_act(state: &GameState, me: Player) -> Action {
    if state.ship(me).cooldown == 0 {
        Action::Shoot
    } else {
        Action::RotateClockwise
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Ras;

impl Agent for Ras {
    fn act(&mut self, state: &GameState, me: Player) -> Action {
        ras_act(state, me)
    }
}
