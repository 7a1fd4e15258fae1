//! The two-player space-battle forward model.
//!
//! Coordinates are stored relative to the arena center, which makes the
//! 180-degree point reflection that maps one ship onto the other an exact
//! negation in floating point. Screen coordinates (origin at the top-left
//! corner of the 640x480 arena) are available through accessors and are
//! what traces record.

mod params;
mod state;
pub mod trace;
mod vec2;

pub use params::{params_from_genome, GameParams, Physics};
pub use state::{
    Action, GameOutcome, GameState, Missile, Player, Ship, Verdict, ARENA_HEIGHT, ARENA_WIDTH,
    HIT_REWARD, MAX_TICKS, MISSILE_LIFETIME, MISSILE_RADIUS,
};
pub use vec2::Vec2;
