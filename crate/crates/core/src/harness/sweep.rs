use std::collections::BTreeMap;

use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ExperimentConfig, SAMPLE_TAG, SWEEP_TAG};
use crate::evaluation::{mean_and_se, play_match, GameValue, MatchSeeds};
use crate::game::params_from_genome;
use crate::seeds;
use crate::space::{self, Genome, ParamSpace};
use crate::{Error, Result};

/// Estimated win rate of one game instance. Parameter columns for
/// dimensions absent from the space are empty.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    /// Rank by ascending mean, 1 = hardest for player 1.
    pub order: u64,
    /// Mixed-radix index of the genome in its space.
    pub index: u64,
    #[serde(with = "space::genome_text")]
    pub genome: Genome,
    pub v_s: f64,
    pub v_t: f64,
    pub v_m: f64,
    pub d: f64,
    pub c: f64,
    pub sr: Option<f64>,
    pub games: u32,
    pub mean: f64,
    pub se: f64,
}

impl SweepRecord {
    /// Value of a named parameter (short or long name).
    pub fn param(&self, name: &str) -> Option<f64> {
        match canonical_dim(name)? {
            space::MAX_SHIP_SPEED => Some(self.v_s),
            space::THRUST_SPEED => Some(self.v_t),
            space::MAX_MISSILE_SPEED => Some(self.v_m),
            space::COOLDOWN => Some(self.d),
            space::MISSILE_COST => Some(self.c),
            space::SHIP_RADIUS => self.sr,
            _ => None,
        }
    }
}

fn canonical_dim(name: &str) -> Option<&'static str> {
    Some(match name {
        "v_s" | "max_ship_speed" => space::MAX_SHIP_SPEED,
        "v_t" | "thrust_speed" => space::THRUST_SPEED,
        "v_m" | "max_missile_speed" => space::MAX_MISSILE_SPEED,
        "d" | "cooldown" => space::COOLDOWN,
        "c" | "missile_cost" => space::MISSILE_COST,
        "sr" | "ship_radius" => space::SHIP_RADIUS,
        _ => return None,
    })
}

/// Genome indices covered by a sweep: the whole space, or a uniform sample
/// without replacement in ascending index order.
pub fn sweep_indices(space: &ParamSpace, sample: Option<u64>, seed: u64) -> Vec<u64> {
    let size = space.size();
    match sample {
        Some(n) if n < size => {
            let mut rng = seeds::rng(seeds::derive(&[seed, SAMPLE_TAG]));
            let mut picked: Vec<u64> = index::sample(&mut rng, size as usize, n as usize)
                .into_iter()
                .map(|i| i as u64)
                .collect();
            picked.sort_unstable();
            picked
        }
        _ => (0..size).collect(),
    }
}

/// Plays `config.sweep_trials` games per genome, in parallel across
/// genomes. Records stay in index order; `order` is each record's position
/// when sorted by ascending mean (ties by index).
pub fn sweep(config: &ExperimentConfig) -> Result<Vec<SweepRecord>> {
    config.validate()?;
    let space = config.space();
    let indices = sweep_indices(&space, config.sweep_sample, config.seed);
    let mut records: Vec<SweepRecord> = indices
        .par_iter()
        .map(|&index| sweep_point(config, &space, index))
        .collect::<Result<_>>()?;
    let mut by_mean: Vec<usize> = (0..records.len()).collect();
    by_mean.sort_by(|&a, &b| records[a].mean.total_cmp(&records[b].mean).then(a.cmp(&b)));
    for (position, &i) in by_mean.iter().enumerate() {
        records[i].order = position as u64 + 1;
    }
    Ok(records)
}

fn sweep_point(config: &ExperimentConfig, space: &ParamSpace, index: u64) -> Result<SweepRecord> {
    let genome = space.genome_at(index);
    let params = params_from_genome(space, &genome)?;
    let values = (0..config.sweep_trials)
        .map(|i| {
            let seed = seeds::derive(&[config.seed, SWEEP_TAG, index, u64::from(i)]);
            let outcome = play_match(
                params,
                config.physics,
                &config.p1,
                &config.p2,
                MatchSeeds::from_seed(seed),
            )?;
            Ok(GameValue::from_outcome(&outcome).value())
        })
        .collect::<Result<Vec<f64>>>()?;
    let (mean, se) = mean_and_se(&values);
    Ok(SweepRecord {
        order: 0,
        index,
        genome,
        v_s: params.max_ship_speed,
        v_t: params.thrust_speed,
        v_m: params.max_missile_speed,
        d: f64::from(params.cooldown),
        c: params.missile_cost,
        sr: space
            .dim_index(space::SHIP_RADIUS)
            .ok()
            .map(|_| params.ship_radius),
        games: config.sweep_trials,
        mean,
        se,
    })
}

/// Mean win rate for one value of a dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarginalRow {
    pub dimension: String,
    pub value: f64,
    /// Sweep points with this value.
    pub points: usize,
    pub mean: f64,
    /// Standard error of the mean over points.
    pub se: f64,
}

fn groups(records: &[SweepRecord], dimension: &str) -> Result<BTreeMap<u64, (f64, Vec<f64>)>> {
    if records.is_empty() {
        return Err(Error::EmptyRecords);
    }
    let mut groups: BTreeMap<u64, (f64, Vec<f64>)> = BTreeMap::new();
    for r in records {
        let value = r
            .param(dimension)
            .ok_or_else(|| Error::UnknownDimension(dimension.to_string()))?;
        // Parameter values are non-negative, so their bit patterns sort in
        // numeric order.
        groups
            .entry(value.to_bits())
            .or_insert_with(|| (value, Vec::new()))
            .1
            .push(r.mean);
    }
    Ok(groups)
}

/// Win rate averaged over sweep points sharing each value of `dimension`,
/// in ascending value order.
pub fn marginals(records: &[SweepRecord], dimension: &str) -> Result<Vec<MarginalRow>> {
    let name =
        canonical_dim(dimension).ok_or_else(|| Error::UnknownDimension(dimension.to_string()))?;
    Ok(groups(records, name)?
        .into_values()
        .map(|(value, means)| {
            let (mean, se) = mean_and_se(&means);
            MarginalRow {
                dimension: name.to_string(),
                value,
                points: means.len(),
                mean,
                se,
            }
        })
        .collect())
}

/// Share of the spread in point means explained by `dimension`: the
/// count-weighted variance of the group means around the overall mean.
pub fn between_group_variance(records: &[SweepRecord], dimension: &str) -> Result<f64> {
    let groups = groups(records, dimension)?;
    let n = records.len() as f64;
    let overall = records.iter().map(|r| r.mean).sum::<f64>() / n;
    Ok(groups
        .values()
        .map(|(_, means)| {
            let m = means.iter().sum::<f64>() / means.len() as f64;
            means.len() as f64 * (m - overall).powi(2)
        })
        .sum::<f64>()
        / n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agents::AgentSpec;

    fn record(c: f64, d: f64, mean: f64) -> SweepRecord {
        SweepRecord {
            order: 0,
            index: 0,
            genome: Genome(vec![0; 5]),
            v_s: 4.0,
            v_t: 1.0,
            v_m: 1.0,
            d,
            c,
            sr: None,
            games: 1,
            mean,
            se: 0.0,
        }
    }

    #[test]
    fn marginal_groups_by_value() {
        let rs = vec![
            record(0.0, 1.0, 0.2),
            record(0.0, 2.0, 0.4),
            record(5.0, 1.0, 1.0),
        ];
        let m = marginals(&rs, "missile_cost").unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!((m[0].value, m[0].points), (0.0, 2));
        assert!((m[0].mean - 0.3).abs() < 1e-12);
        assert_eq!((m[1].value, m[1].mean, m[1].se), (5.0, 1.0, 0.0));
        assert!(marginals(&rs, "sr").unwrap_err().to_string().contains("sr"));
        assert!(matches!(marginals(&[], "c"), Err(Error::EmptyRecords)));
    }

    #[test]
    fn between_group_variance_by_hand() {
        let rs = vec![
            record(0.0, 1.0, 0.2),
            record(0.0, 2.0, 0.4),
            record(5.0, 1.0, 1.0),
        ];
        // overall 8/15; c groups 0.3 (x2), 1.0 (x1)
        let o = 1.6 / 3.0;
        let expected = (2.0 * (0.3 - o) * (0.3 - o) + (1.0 - o) * (1.0 - o)) / 3.0;
        assert!((between_group_variance(&rs, "c").unwrap() - expected).abs() < 1e-12);
        // d groups 0.6 (x2), 0.4 (x1)
        let expected = (2.0 * (0.6 - o) * (0.6 - o) + (0.4 - o) * (0.4 - o)) / 3.0;
        assert!((between_group_variance(&rs, "d").unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn sample_is_sorted_and_distinct() {
        let space = ParamSpace::game_5d();
        let idx = sweep_indices(&space, Some(200), 3);
        assert_eq!(idx.len(), 200);
        assert!(idx.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(idx, sweep_indices(&space, Some(200), 3));
        assert_ne!(idx, sweep_indices(&space, Some(200), 4));
        assert_eq!(
            sweep_indices(&ParamSpace::binary(3).unwrap(), Some(100), 1).len(),
            8
        );
    }

    #[test]
    fn small_sweep_carries_sort_key() {
        let config = ExperimentConfig {
            p1: AgentSpec::random(),
            p2: AgentSpec::ras(),
            sweep_sample: Some(12),
            sweep_trials: 3,
            ..ExperimentConfig::default()
        };
        let rs = sweep(&config).unwrap();
        assert_eq!(rs.len(), 12);
        assert!(rs.windows(2).all(|w| w[0].index < w[1].index));
        let mut sorted = rs.clone();
        sorted.sort_by_key(|r| r.order);
        assert!(sorted.windows(2).all(|w| w[0].mean <= w[1].mean));
        assert_eq!(
            sorted.iter().map(|r| r.order).collect::<Vec<_>>(),
            (1..=12).collect::<Vec<_>>()
        );
        assert!(rs.iter().all(|r| r.sr.is_none() && r.games == 3));
        assert_eq!(rs, sweep(&config).unwrap());
    }
}
