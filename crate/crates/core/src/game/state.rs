use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{GameParams, Physics, Vec2};
use crate::seeds;
use crate::{Error, Result};

pub const ARENA_WIDTH: f64 = 640.0;
pub const ARENA_HEIGHT: f64 = 480.0;
pub const MAX_TICKS: u32 = 500;
pub const MISSILE_LIFETIME: u32 = 30;
pub const MISSILE_RADIUS: f64 = 4.0;
pub const HIT_REWARD: f64 = 100.0;

const HALF_W: f64 = ARENA_WIDTH / 2.0;
const HALF_H: f64 = ARENA_HEIGHT / 2.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    P1,
    P2,
}

impl Player {
    pub const BOTH: [Player; 2] = [Player::P1, Player::P2];

    pub fn index(self) -> usize {
        match self {
            Player::P1 => 0,
            Player::P2 => 1,
        }
    }

    pub fn opponent(self) -> Player {
        match self {
            Player::P1 => Player::P2,
            Player::P2 => Player::P1,
        }
    }

    /// 1-based player number.
    pub fn from_number(n: u8) -> Option<Player> {
        match n {
            1 => Some(Player::P1),
            2 => Some(Player::P2),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Action {
    DoNothing,
    RotateClockwise,
    RotateAnticlockwise,
    Thrust,
    Shoot,
}

impl Action {
    pub const ALL: [Action; 5] = [
        Action::DoNothing,
        Action::RotateClockwise,
        Action::RotateAnticlockwise,
        Action::Thrust,
        Action::Shoot,
    ];
    pub const COUNT: usize = 5;

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: i64) -> Result<Action> {
        usize::try_from(i)
            .ok()
            .and_then(|i| Action::ALL.get(i).copied())
            .ok_or(Error::InvalidAction(i))
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Action {
        Action::ALL[rng.gen_range(0..Action::COUNT)]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ship {
    /// Position relative to the arena center, px. See [`Ship::screen_position`].
    pub pos: Vec2,
    pub vel: Vec2,
    /// Unit vector the ship is facing.
    pub heading: Vec2,
    /// Ticks until the next launch is allowed.
    pub cooldown: u32,
    pub missiles_fired: u32,
    pub hits: u32,
    /// Maintained incrementally; always equals `100 * hits - c * missiles_fired`.
    pub score: f64,
}

impl Ship {
    fn new(pos: Vec2, heading: Vec2) -> Self {
        Self {
            pos,
            vel: Vec2::ZERO,
            heading,
            cooldown: 0,
            missiles_fired: 0,
            hits: 0,
            score: 0.0,
        }
    }

    pub fn screen_position(&self) -> Vec2 {
        Vec2::new(self.pos.x + HALF_W, self.pos.y + HALF_H)
    }

    /// Heading angle in radians, measured in screen coordinates.
    pub fn heading_angle(&self) -> f64 {
        self.heading.angle()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Missile {
    /// Position relative to the arena center, px.
    pub pos: Vec2,
    pub vel: Vec2,
    pub owner: Player,
    pub age: u32,
}

impl Missile {
    pub fn screen_position(&self) -> Vec2 {
        Vec2::new(self.pos.x + HALF_W, self.pos.y + HALF_H)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    P1Win,
    P2Win,
    Draw,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameOutcome {
    pub verdict: Verdict,
    pub scores: [f64; 2],
}

impl GameOutcome {
    pub fn from_scores(scores: [f64; 2]) -> Self {
        let verdict = if scores[0] > scores[1] {
            Verdict::P1Win
        } else if scores[1] > scores[0] {
            Verdict::P2Win
        } else {
            Verdict::Draw
        };
        Self { verdict, scores }
    }
}

/// Complete simulation state. Cloning yields an independent forward model.
#[derive(Clone, Debug, PartialEq)]
pub struct GameState {
    pub params: GameParams,
    pub physics: Physics,
    pub ships: [Ship; 2],
    pub missiles: Vec<Missile>,
    pub tick: u32,
    /// One recoil stream per ship so that swapping players swaps streams.
    rngs: [ChaCha8Rng; 2],
}

fn wrap(v: f64, half: f64) -> f64 {
    if v > half {
        v - 2.0 * half
    } else if v < -half {
        v + 2.0 * half
    } else {
        v
    }
}

fn wrap_vec(v: Vec2) -> Vec2 {
    Vec2::new(wrap(v.x, HALF_W), wrap(v.y, HALF_H))
}

fn clamp_speed(v: Vec2, max: f64) -> Vec2 {
    let sq = v.norm_sq();
    if sq > max * max {
        v * (max / sq.sqrt())
    } else {
        v
    }
}

/// Shortest displacement from `b` to `a` on the torus.
pub(crate) fn toroidal_delta(a: Vec2, b: Vec2) -> Vec2 {
    wrap_vec(a - b)
}

impl GameState {
    /// Fresh game with default physics; both recoil streams derive from `seed`.
    pub fn new(params: GameParams, seed: u64) -> Self {
        Self::with_physics(params, Physics::default(), Self::engine_seeds(seed))
    }

    pub fn engine_seeds(seed: u64) -> [u64; 2] {
        [seeds::derive(&[seed, 0]), seeds::derive(&[seed, 1])]
    }

    /// Ships start on the horizontal axis through the center, mirrored about
    /// it, facing each other.
    pub fn with_physics(params: GameParams, physics: Physics, engine_seeds: [u64; 2]) -> Self {
        let offset = physics.start_distance / 2.0;
        Self {
            params,
            physics,
            ships: [
                Ship::new(Vec2::new(-offset, 0.0), Vec2::new(1.0, 0.0)),
                Ship::new(Vec2::new(offset, 0.0), Vec2::new(-1.0, 0.0)),
            ],
            missiles: Vec::new(),
            tick: 0,
            rngs: engine_seeds.map(seeds::rng),
        }
    }

    /// Replaces the engine's random streams; planning agents call this on
    /// their private copies.
    pub fn reseed(&mut self, seed: u64) {
        self.rngs = Self::engine_seeds(seed).map(seeds::rng);
    }

    pub fn ship(&self, p: Player) -> &Ship {
        &self.ships[p.index()]
    }

    pub fn ship_mut(&mut self, p: Player) -> &mut Ship {
        &mut self.ships[p.index()]
    }

    pub fn is_over(&self) -> bool {
        self.tick >= MAX_TICKS
    }

    pub fn score(&self, p: Player) -> f64 {
        self.ship(p).score
    }

    /// Score recomputed from the counters: `100 * hits - c * missiles_fired`.
    pub fn score_from_counters(&self, p: Player) -> f64 {
        let ship = self.ship(p);
        HIT_REWARD * f64::from(ship.hits)
            - self.params.missile_cost * f64::from(ship.missiles_fired)
    }

    pub fn outcome(&self) -> Result<GameOutcome> {
        if !self.is_over() {
            return Err(Error::GameNotFinished(self.tick));
        }
        Ok(GameOutcome::from_scores([
            self.score(Player::P1),
            self.score(Player::P2),
        ]))
    }

    /// Advances one tick with both actions applied simultaneously.
    pub fn step(&mut self, a1: Action, a2: Action) -> Result<()> {
        if self.is_over() {
            return Err(Error::GameFinished(self.tick));
        }
        let params = self.params;
        let physics = self.physics;

        for (i, action) in [a1, a2].into_iter().enumerate() {
            let ship = &mut self.ships[i];
            match action {
                Action::DoNothing => {}
                Action::RotateClockwise => {
                    let (sin, cos) = physics.rotation_step.sin_cos();
                    ship.heading = normalized(ship.heading.rotated(cos, sin))
                }
                Action::RotateAnticlockwise => {
                    let (sin, cos) = physics.rotation_step.sin_cos();
                    ship.heading = normalized(ship.heading.rotated(cos, -sin))
                }
                Action::Thrust => {
                    ship.vel = clamp_speed(
                        ship.vel + ship.heading * params.thrust_speed,
                        params.max_ship_speed,
                    )
                }
                Action::Shoot => {
                    if ship.cooldown == 0 {
                        let offset = params.ship_radius + MISSILE_RADIUS + 1.0;
                        self.missiles.push(Missile {
                            pos: wrap_vec(ship.pos + ship.heading * offset),
                            vel: ship.heading * params.max_missile_speed,
                            owner: Player::BOTH[i],
                            age: 0,
                        });
                        ship.missiles_fired += 1;
                        ship.score -= params.missile_cost;
                        ship.cooldown = params.cooldown;
                        let recoil = self.rngs[i].gen::<f64>() * physics.max_recoil;
                        ship.vel =
                            clamp_speed(ship.vel - ship.heading * recoil, params.max_ship_speed);
                    }
                }
            }
        }

        for ship in &mut self.ships {
            ship.pos = wrap_vec(ship.pos + ship.vel);
            ship.vel = ship.vel * physics.friction;
        }
        // Expired missiles are dropped before they can collide.
        let reach = params.ship_radius + MISSILE_RADIUS;
        let reach_sq = reach * reach;
        let ships = &mut self.ships;
        self.missiles.retain_mut(|m| {
            m.pos = wrap_vec(m.pos + m.vel);
            m.age += 1;
            if m.age > MISSILE_LIFETIME {
                return false;
            }
            let target = m.owner.opponent().index();
            if toroidal_delta(m.pos, ships[target].pos).norm_sq() <= reach_sq {
                let owner = &mut ships[m.owner.index()];
                owner.hits += 1;
                owner.score += HIT_REWARD;
                false
            } else {
                true
            }
        });

        for ship in &mut self.ships {
            ship.cooldown = ship.cooldown.saturating_sub(1);
        }
        self.tick += 1;
        Ok(())
    }

    /// Non-mutating variant of [`GameState::step`].
    pub fn stepped(&self, a1: Action, a2: Action) -> Result<GameState> {
        let mut next = self.clone();
        next.step(a1, a2)?;
        Ok(next)
    }
}

fn normalized(v: Vec2) -> Vec2 {
    v * (1.0 / v.norm())
}
