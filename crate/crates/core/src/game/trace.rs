//! JSON-lines game traces.
//!
//! One [`TraceRecord`] per tick, written after the tick's step. Field order is
//! fixed by the struct definitions so traces diff cleanly:
//!
//! `tick, actions[2], scores[2], ships[2]{x, y, vx, vy, heading, cooldown,
//! missiles_fired, hits}, missiles[]{owner, x, y, vx, vy, age}`
//!
//! Positions are screen coordinates (origin top-left, 640x480), headings are
//! radians.

use serde::{Deserialize, Serialize};

use super::{Action, GameState, Player};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShipTrace {
    pub x: f64,
    pub y: f64,
    pub vx: f64,
    pub vy: f64,
    pub heading: f64,
    pub cooldown: u32,
    pub missiles_fired: u32,
    pub hits: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MissileTrace {
    pub owner: u8,
    pub x: f64,
    pub y: f64,
    pub vx: f64,
    pub vy: f64,
    pub age: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub tick: u32,
    pub actions: [Action; 2],
    pub scores: [f64; 2],
    pub ships: [ShipTrace; 2],
    pub missiles: Vec<MissileTrace>,
}

impl TraceRecord {
    pub fn capture(state: &GameState, actions: [Action; 2]) -> Self {
        let ship = |p: Player| {
            let s = state.ship(p);
            let pos = s.screen_position();
            ShipTrace {
                x: pos.x,
                y: pos.y,
                vx: s.vel.x,
                vy: s.vel.y,
                heading: s.heading_angle(),
                cooldown: s.cooldown,
                missiles_fired: s.missiles_fired,
                hits: s.hits,
            }
        };
        Self {
            tick: state.tick,
            actions,
            scores: [state.score(Player::P1), state.score(Player::P2)],
            ships: [ship(Player::P1), ship(Player::P2)],
            missiles: state
                .missiles
                .iter()
                .map(|m| {
                    let pos = m.screen_position();
                    MissileTrace {
                        owner: m.owner.index() as u8 + 1,
                        x: pos.x,
                        y: pos.y,
                        vx: m.vel.x,
                        vy: m.vel.y,
                        age: m.age,
                    }
                })
                .collect(),
        }
    }
}
