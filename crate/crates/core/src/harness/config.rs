use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::agents::AgentSpec;
use crate::game::Physics;
use crate::optimizers::{Algorithm, MabConfig};
use crate::space::ParamSpace;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpaceKind {
    #[serde(rename = "5d")]
    Five,
    #[serde(rename = "6d")]
    Six,
}

impl SpaceKind {
    pub fn space(self) -> ParamSpace {
        match self {
            SpaceKind::Five => ParamSpace::game_5d(),
            SpaceKind::Six => ParamSpace::game_6d(),
        }
    }
}

impl FromStr for SpaceKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "5" | "5d" => Ok(SpaceKind::Five),
            "6" | "6d" => Ok(SpaceKind::Six),
            other => Err(Error::InvalidValue {
                key: "space".into(),
                message: format!("`{other}` (5d | 6d)"),
            }),
        }
    }
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpaceKind::Five => "5d",
            SpaceKind::Six => "6d",
        })
    }
}

/// Everything that determines an experiment's output. Parallelism is
/// deliberately absent: it never changes results.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub space: SpaceKind,
    pub p1: AgentSpec,
    pub p2: AgentSpec,
    pub algorithm: Algorithm,
    /// Games per fitness call.
    pub resamples: u32,
    /// Optimization budget per trial, in games.
    pub budget: u64,
    /// Independent optimizer runs.
    pub trials: u32,
    pub seed: u64,
    /// Games used to re-estimate each recommended genome, outside the budget.
    pub audit_games: u32,
    /// Points in a sweep; `None` sweeps the whole space.
    pub sweep_sample: Option<u64>,
    /// Games per sweep point.
    pub sweep_trials: u32,
    /// Games per genome in validation.
    pub validate_games: u32,
    pub mab: MabConfig,
    pub physics: Physics,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            space: SpaceKind::Five,
            p1: AgentSpec::olmcts(350),
            p2: AgentSpec::ras(),
            algorithm: Algorithm::Rmhc,
            resamples: 5,
            budget: 5000,
            trials: 30,
            seed: 1,
            audit_games: 30,
            sweep_sample: Some(200),
            sweep_trials: 11,
            validate_games: 100,
            mab: MabConfig::default(),
            physics: Physics::default(),
        }
    }
}

/// Settings read from a config file that are not part of the experiment
/// identity.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunSettings {
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    value.parse().map_err(|e: T::Err| Error::InvalidValue {
        key: key.to_string(),
        message: format!("`{value}`: {e}"),
    })
}

impl ExperimentConfig {
    pub fn space(&self) -> ParamSpace {
        self.space.space()
    }

    /// Applies one `key=value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "space" => self.space = value.parse()?,
            "p1" => self.p1 = value.parse()?,
            "p2" => self.p2 = value.parse()?,
            "algo" | "algorithm" => self.algorithm = value.parse()?,
            "r" | "resamples" => self.resamples = parse(key, value)?,
            "budget" => self.budget = parse(key, value)?,
            "trials" => self.trials = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "audit" | "audit_games" => self.audit_games = parse(key, value)?,
            "sample" | "sweep_sample" => {
                let n: u64 = parse(key, value)?;
                self.sweep_sample = (n > 0).then_some(n);
            }
            "sweep_trials" => self.sweep_trials = parse(key, value)?,
            "validate_games" => self.validate_games = parse(key, value)?,
            "urgency_log" => self.mab.urgency_log = value.parse()?,
            "delta_mode" => self.mab.delta_mode = value.parse()?,
            "recoil" | "max_recoil" => self.physics.max_recoil = parse(key, value)?,
            "friction" => self.physics.friction = parse(key, value)?,
            "start_distance" => self.physics.start_distance = parse(key, value)?,
            other => {
                return Err(Error::InvalidValue {
                    key: other.to_string(),
                    message: "unknown key".into(),
                })
            }
        }
        Ok(())
    }

    /// Parses a flat `key = value` file (`#` starts a comment). `jobs` and
    /// `out` are returned separately.
    pub fn parse_file_contents(&mut self, text: &str) -> Result<RunSettings> {
        let mut settings = RunSettings::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config {
                    line: n + 1,
                    message: format!("expected `key = value`, got `{line}`"),
                });
            };
            let (key, value) = (key.trim(), value.trim());
            let located = |e: Error| Error::Config {
                line: n + 1,
                message: e.to_string(),
            };
            match key {
                "jobs" => settings.jobs = Some(parse(key, value).map_err(located)?),
                "out" => settings.out = Some(PathBuf::from(value)),
                _ => self.set(key, value).map_err(located)?,
            }
        }
        self.validate()?;
        Ok(settings)
    }

    pub fn load(&mut self, path: &Path) -> Result<RunSettings> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        self.parse_file_contents(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |key: &str, message: &str| {
            Err(Error::InvalidValue {
                key: key.into(),
                message: message.into(),
            })
        };
        self.p1.validate()?;
        self.p2.validate()?;
        if self.budget == 0 {
            return bad("budget", "must be positive");
        }
        if self.trials == 0 {
            return bad("trials", "must be at least 1");
        }
        if self.resamples == 0 {
            return Err(Error::ZeroResamples);
        }
        if self.sweep_trials == 0 {
            return bad("sweep_trials", "must be at least 1");
        }
        if self.validate_games == 0 {
            return bad("validate_games", "must be at least 1");
        }
        if !(self.physics.max_recoil >= 0.0 && self.physics.max_recoil.is_finite()) {
            return bad("recoil", "must be a finite non-negative number");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agents::AgentKind;
    use crate::optimizers::UrgencyLog;

    #[test]
    fn parses_flat_file() {
        let mut c = ExperimentConfig::default();
        let s = c
            .parse_file_contents(
                "# experiment\nspace = 6d\np1 = olmcts:700\np2=random\nalgo = mabrmhc\nr = 50\n\
                 budget=1000 # per trial\ntrials = 11\nseed = 9\nurgency_log = dimension\njobs = 4\nout = results\nsample = 0\n",
            )
            .unwrap();
        assert_eq!(c.space, SpaceKind::Six);
        assert_eq!(c.p1.iterations, 700);
        assert_eq!(c.p2.kind, AgentKind::Random);
        assert_eq!(c.algorithm, Algorithm::Mabrmhc);
        assert_eq!((c.resamples, c.budget, c.trials, c.seed), (50, 1000, 11, 9));
        assert_eq!(c.mab.urgency_log, UrgencyLog::DimensionPulls);
        assert_eq!(c.sweep_sample, None);
        assert_eq!(s.jobs, Some(4));
        assert_eq!(s.out, Some(PathBuf::from("results")));
    }

    #[test]
    fn reports_line_numbers() {
        let mut c = ExperimentConfig::default();
        let err = c.parse_file_contents("seed = 1\n\nbudget\n").unwrap_err();
        assert!(matches!(err, Error::Config { line: 3, .. }));
        let err = c.parse_file_contents("colour = blue\n").unwrap_err();
        assert!(matches!(err, Error::Config { line: 1, .. }));
        assert!(c.parse_file_contents("budget = 0\n").is_err());
        assert!(c.parse_file_contents("trials = 0\n").is_err());
    }

    #[test]
    fn config_serializes() {
        let c = ExperimentConfig::default();
        let json = serde_json::to_string(&c).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }
}
