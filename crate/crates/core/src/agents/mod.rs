//! Play-testing policies.
//!
//! Three agents probe a game instance: [`Ras`] (rotate-and-shoot, fully
//! deterministic), [`RandomAgent`] (uniform over the five actions) and
//! [`OlMcts`] (open-loop Monte-Carlo tree search on the score difference).

mod olmcts;
mod random;
mod ras;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::game::{Action, GameState, Player};
use crate::{Error, Result};

pub use olmcts::{olmcts_act, OlMcts, SearchReport};
pub use random::{random_act, RandomAgent};
pub use ras::{ras_act, Ras};

pub trait Agent: Send {
    fn act(&mut self, state: &GameState, me: Player) -> Action;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AgentKind {
    Ras,
    Random,
    Olmcts,
}

pub const DEFAULT_ITERATIONS: u32 = 350;
pub const DEFAULT_ROLLOUT_DEPTH: u32 = 10;
pub const DEFAULT_UCB_CONSTANT: f64 = std::f64::consts::SQRT_2;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgentSpec {
    pub kind: AgentKind,
    /// MCTS iterations per decision (OLMCTS only).
    pub iterations: u32,
    pub rollout_depth: u32,
    pub ucb_constant: f64,
    /// Mixed into every per-game agent seed.
    pub seed: u64,
}

impl AgentSpec {
    pub fn ras() -> Self {
        Self::of_kind(AgentKind::Ras)
    }

    pub fn random() -> Self {
        Self::of_kind(AgentKind::Random)
    }

    pub fn olmcts(iterations: u32) -> Self {
        Self {
            iterations,
            ..Self::of_kind(AgentKind::Olmcts)
        }
    }

    fn of_kind(kind: AgentKind) -> Self {
        Self {
            kind,
            iterations: DEFAULT_ITERATIONS,
            rollout_depth: DEFAULT_ROLLOUT_DEPTH,
            ucb_constant: DEFAULT_UCB_CONSTANT,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.kind == AgentKind::Olmcts {
            if self.iterations == 0 {
                return Err(Error::InvalidAgent(
                    "OLMCTS needs at least one iteration".into(),
                ));
            }
            if self.rollout_depth == 0 {
                return Err(Error::InvalidAgent(
                    "rollout depth must be at least 1".into(),
                ));
            }
            if !(self.ucb_constant.is_finite() && self.ucb_constant >= 0.0) {
                return Err(Error::InvalidAgent(format!(
                    "UCB constant {} is not a finite non-negative number",
                    self.ucb_constant
                )));
            }
        }
        Ok(())
    }

    /// Instantiates the policy with a per-game seed.
    pub fn build(&self, seed: u64) -> Result<Box<dyn Agent>> {
        self.validate()?;
        let seed = crate::seeds::derive(&[self.seed, seed]);
        Ok(match self.kind {
            AgentKind::Ras => Box::new(Ras),
            AgentKind::Random => Box::new(RandomAgent::new(seed)),
            AgentKind::Olmcts => Box::new(OlMcts::new(*self, seed)?),
        })
    }
}

impl fmt::Display for AgentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            AgentKind::Ras => f.write_str("ras"),
            AgentKind::Random => f.write_str("random"),
            AgentKind::Olmcts => {
                write!(f, "olmcts:{}", self.iterations)?;
                // Trailing defaults are omitted.
                if self.ucb_constant != DEFAULT_UCB_CONSTANT {
                    write!(f, ":{}:{}", self.rollout_depth, self.ucb_constant)
                } else if self.rollout_depth != DEFAULT_ROLLOUT_DEPTH {
                    write!(f, ":{}", self.rollout_depth)
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// `ras`, `random`, or `olmcts[:iterations[:rollout_depth[:ucb_constant]]]`.
impl FromStr for AgentSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.trim().split(':');
        let kind = parts.next().unwrap_or_default().to_ascii_lowercase();
        let bad = |msg: String| Error::InvalidAgent(format!("`{s}`: {msg}"));
        let mut spec = match kind.as_str() {
            "ras" => AgentSpec::ras(),
            "random" => AgentSpec::random(),
            "olmcts" => AgentSpec::olmcts(DEFAULT_ITERATIONS),
            other => return Err(bad(format!("unknown agent kind `{other}`"))),
        };
        let rest: Vec<&str> = parts.collect();
        if spec.kind != AgentKind::Olmcts && !rest.is_empty() {
            return Err(bad("only olmcts takes options".into()));
        }
        if rest.len() > 3 {
            return Err(bad("too many options".into()));
        }
        if let Some(v) = rest.first() {
            spec.iterations = v.parse().map_err(|e| bad(format!("iterations: {e}")))?;
        }
        if let Some(v) = rest.get(1) {
            spec.rollout_depth = v.parse().map_err(|e| bad(format!("rollout depth: {e}")))?;
        }
        if let Some(v) = rest.get(2) {
            spec.ucb_constant = v.parse().map_err(|e| bad(format!("UCB constant: {e}")))?;
        }
        spec.validate()?;
        Ok(spec)
    }
}

/// Replays a fixed list of action indices, then does nothing. Indices are
/// validated up front.
pub struct Scripted {
    actions: Vec<Action>,
    next: usize,
}

impl Scripted {
    pub fn from_indices(indices: &[i64]) -> Result<Self> {
        Ok(Self {
            actions: indices
                .iter()
                .map(|&i| Action::from_index(i))
                .collect::<Result<_>>()?,
            next: 0,
        })
    }
}

impl Agent for Scripted {
    fn act(&mut self, _state: &GameState, _me: Player) -> Action {
        let a = self
            .actions
            .get(self.next)
            .copied()
            .unwrap_or(Action::DoNothing);
        self.next += 1;
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_specs() {
        assert_eq!("ras".parse::<AgentSpec>().unwrap().kind, AgentKind::Ras);
        assert_eq!(
            "Random".parse::<AgentSpec>().unwrap().kind,
            AgentKind::Random
        );
        let o: AgentSpec = "olmcts:700".parse().unwrap();
        assert_eq!(
            (o.kind, o.iterations, o.rollout_depth),
            (AgentKind::Olmcts, 700, 10)
        );
        let o: AgentSpec = "olmcts:175:5:0.5".parse().unwrap();
        assert_eq!(
            (o.iterations, o.rollout_depth, o.ucb_constant),
            (175, 5, 0.5)
        );
        assert_eq!(o.to_string().parse::<AgentSpec>().unwrap(), o);
        assert_eq!("olmcts".parse::<AgentSpec>().unwrap().iterations, 350);
        for text in [
            "olmcts:350",
            "olmcts:700:5",
            "olmcts:175:10:0.5",
            "ras",
            "random",
        ] {
            assert_eq!(text.parse::<AgentSpec>().unwrap().to_string(), text);
        }
    }

    #[test]
    fn reject_bad_specs() {
        for s in [
            "",
            "mcts",
            "ras:3",
            "olmcts:0",
            "olmcts:10:0",
            "olmcts:x",
            "olmcts:1:1:1:1",
        ] {
            assert!(s.parse::<AgentSpec>().is_err(), "{s}");
        }
    }

    #[test]
    fn scripted_rejects_unknown_actions() {
        assert!(matches!(
            Scripted::from_indices(&[0, 7]),
            Err(Error::InvalidAction(7))
        ));
        assert!(Scripted::from_indices(&[0, 1, 2, 3, 4]).is_ok());
    }
}
