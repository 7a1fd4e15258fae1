use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::space::{
    Genome, ParamSpace, COOLDOWN, MAX_MISSILE_SPEED, MAX_SHIP_SPEED, MISSILE_COST, SHIP_RADIUS,
    THRUST_SPEED,
};
use crate::{Error, Result};

/// The tunable rules of one game instance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameParams {
    /// Maximal ship speed, px/tick.
    pub max_ship_speed: f64,
    /// Speed added by one Thrust action, px/tick.
    pub thrust_speed: f64,
    /// Missile speed, px/tick.
    pub max_missile_speed: f64,
    /// Ticks between two launches.
    pub cooldown: u32,
    /// Points paid per launched missile.
    pub missile_cost: f64,
    pub ship_radius: f64,
}

impl Default for GameParams {
    fn default() -> Self {
        Self {
            max_ship_speed: 4.0,
            thrust_speed: 1.0,
            max_missile_speed: 1.0,
            cooldown: 1,
            missile_cost: 0.0,
            ship_radius: 20.0,
        }
    }
}

/// Engine constants that are not part of the searched rule space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Physics {
    /// Per-tick velocity multiplier applied to ships.
    pub friction: f64,
    /// Heading change of one rotate action, radians.
    pub rotation_step: f64,
    /// Upper bound of the uniform recoil impulse applied on launch; 0 disables recoil.
    pub max_recoil: f64,
    /// Distance between the two ships at the start of a game, px.
    pub start_distance: f64,
}

impl Default for Physics {
    fn default() -> Self {
        Self {
            friction: 0.99,
            rotation_step: PI / 16.0,
            max_recoil: 1.0,
            start_distance: 320.0,
        }
    }
}

impl Physics {
    pub fn without_recoil() -> Self {
        Self {
            max_recoil: 0.0,
            ..Self::default()
        }
    }
}

/// Decodes a genome into game rules. Dimensions absent from `space` keep their
/// default value (ship radius 20 in the five-parameter space).
pub fn params_from_genome(space: &ParamSpace, genome: &Genome) -> Result<GameParams> {
    let values = space.values(genome)?;
    let mut params = GameParams::default();
    for (dim, value) in space.dims().iter().zip(values) {
        match dim.name.as_str() {
            MAX_SHIP_SPEED => params.max_ship_speed = value,
            THRUST_SPEED => params.thrust_speed = value,
            MAX_MISSILE_SPEED => params.max_missile_speed = value,
            COOLDOWN => {
                if value < 1.0 || value.fract() != 0.0 {
                    return Err(Error::InvalidValue {
                        key: COOLDOWN.into(),
                        message: format!("{value} is not a positive integer"),
                    });
                }
                params.cooldown = value as u32
            }
            MISSILE_COST => params.missile_cost = value,
            SHIP_RADIUS => params.ship_radius = value,
            other => return Err(Error::UnknownDimension(other.to_string())),
        }
    }
    Ok(params)
}
