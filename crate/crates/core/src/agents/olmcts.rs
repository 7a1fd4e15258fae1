//! Open-loop Monte-Carlo tree search.
//!
//! The tree is keyed by own-action prefixes only. Every iteration clones the
//! root state, gives the clone a fresh engine seed and replays the prefix
//! through the forward model, so the statistics of a node average over the
//! game's stochasticity and over the opponent, which is modelled as uniformly
//! random both inside the tree and during rollouts.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{Agent, AgentKind, AgentSpec};
use crate::game::{Action, GameState, Player};
use crate::{Error, Result};

const NO_CHILD: u32 = u32::MAX;

#[derive(Clone, Debug)]
struct Node {
    children: [u32; Action::COUNT],
    visits: u32,
    total: f64,
}

impl Node {
    fn new() -> Self {
        Self {
            children: [NO_CHILD; Action::COUNT],
            visits: 0,
            total: 0.0,
        }
    }
}

/// Statistics of one decision.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchReport {
    pub action: Action,
    /// Visits of each root child, indexed by [`Action::index`].
    pub root_visits: [u32; Action::COUNT],
    /// Mean raw score difference of each root child (0 if unvisited).
    pub root_values: [f64; Action::COUNT],
    /// Forward-model steps simulated during the search.
    pub forward_steps: u64,
    /// Deepest prefix reached inside the tree.
    pub max_tree_depth: u32,
}

pub struct OlMcts {
    spec: AgentSpec,
    rng: ChaCha8Rng,
    nodes: Vec<Node>,
}

impl OlMcts {
    pub fn new(spec: AgentSpec, seed: u64) -> Result<Self> {
        if spec.kind != AgentKind::Olmcts {
            return Err(Error::InvalidAgent(format!("{spec} is not an OLMCTS spec")));
        }
        spec.validate()?;
        Ok(Self {
            spec,
            rng: crate::seeds::rng(seed),
            nodes: Vec::new(),
        })
    }

    pub fn search(&mut self, root: &GameState, me: Player) -> Result<SearchReport> {
        if root.is_over() {
            return Err(Error::GameFinished(root.tick));
        }
        self.nodes.clear();
        self.nodes.push(Node::new());
        let mut bounds = (f64::INFINITY, f64::NEG_INFINITY);
        let mut forward_steps = 0u64;
        let mut max_tree_depth = 0u32;
        let mut path: Vec<u32> = Vec::with_capacity(32);

        for _ in 0..self.spec.iterations {
            let mut sim = root.clone();
            sim.reseed(self.rng.gen());
            path.clear();
            path.push(0);
            let mut node = 0u32;

            // selection and expansion
            while !sim.is_over() {
                let current = &self.nodes[node as usize];
                let unexpanded = current.children.iter().filter(|&&c| c == NO_CHILD).count();
                let action = if unexpanded > 0 {
                    let pick = self.rng.gen_range(0..unexpanded);
                    let index = current
                        .children
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c == NO_CHILD)
                        .nth(pick)
                        .map(|(i, _)| i)
                        .expect("counted above");
                    let child = self.nodes.len() as u32;
                    self.nodes.push(Node::new());
                    self.nodes[node as usize].children[index] = child;
                    Action::ALL[index]
                } else {
                    self.ucb_child(node, bounds)
                };
                self.advance(&mut sim, me, action);
                forward_steps += 1;
                node = self.nodes[node as usize].children[action.index()];
                path.push(node);
                if unexpanded > 0 {
                    break;
                }
            }
            max_tree_depth = max_tree_depth.max(path.len() as u32 - 1);

            // rollout
            for _ in 0..self.spec.rollout_depth {
                if sim.is_over() {
                    break;
                }
                let own = Action::random(&mut self.rng);
                self.advance(&mut sim, me, own);
                forward_steps += 1;
            }

            let value = sim.score(me) - sim.score(me.opponent());
            bounds = (bounds.0.min(value), bounds.1.max(value));
            for &n in &path {
                let node = &mut self.nodes[n as usize];
                node.visits += 1;
                node.total += value;
            }
        }

        let root_node = &self.nodes[0];
        let mut root_visits = [0u32; Action::COUNT];
        let mut root_values = [0f64; Action::COUNT];
        for (i, &c) in root_node.children.iter().enumerate() {
            if c != NO_CHILD {
                let child = &self.nodes[c as usize];
                root_visits[i] = child.visits;
                root_values[i] = child.total / f64::from(child.visits.max(1));
            }
        }
        // most visited, lowest index on ties
        let mut best = 0;
        for i in 1..Action::COUNT {
            if root_visits[i] > root_visits[best] {
                best = i;
            }
        }
        Ok(SearchReport {
            action: Action::ALL[best],
            root_visits,
            root_values,
            forward_steps,
            max_tree_depth,
        })
    }

    fn advance(&mut self, sim: &mut GameState, me: Player, own: Action) {
        let other = Action::random(&mut self.rng);
        let (a1, a2) = match me {
            Player::P1 => (own, other),
            Player::P2 => (other, own),
        };
        sim.step(a1, a2)
            .expect("search never steps a finished game");
    }

    /// UCB1 over fully expanded children with values normalized by the
    /// running min/max of leaf values.
    fn ucb_child(&self, node: u32, (lo, hi): (f64, f64)) -> Action {
        let parent = &self.nodes[node as usize];
        let log_parent = f64::from(parent.visits).ln();
        let mut best = 0;
        let mut best_score = f64::NEG_INFINITY;
        for (i, &c) in parent.children.iter().enumerate() {
            let child = &self.nodes[c as usize];
            let visits = f64::from(child.visits);
            let mean = child.total / visits;
            let exploit = if hi > lo {
                (mean - lo) / (hi - lo)
            } else {
                0.0
            };
            let score = exploit + self.spec.ucb_constant * (log_parent / visits).sqrt();
            if score > best_score {
                best_score = score;
                best = i;
            }
        }
        Action::ALL[best]
    }
}

impl Agent for OlMcts {
    fn act(&mut self, state: &GameState, me: Player) -> Action {
        self.search(state, me)
            .map(|r| r.action)
            .unwrap_or(Action::DoNothing)
    }
}

/// One OLMCTS decision with a freshly seeded agent.
pub fn olmcts_act(state: &GameState, me: Player, spec: &AgentSpec, seed: u64) -> Result<Action> {
    Ok(OlMcts::new(*spec, seed)?.search(state, me)?.action)
}
