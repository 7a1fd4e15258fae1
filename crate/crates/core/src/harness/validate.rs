use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ExperimentConfig, VALIDATE_TAG};
use crate::evaluation::{mean_and_se, play_match, GameValue, MatchSeeds};
use crate::game::params_from_genome;
use crate::seeds;
use crate::space::{genome_text, Genome};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenomeValidation {
    #[serde(with = "genome_text")]
    pub genome: Genome,
    pub games: u32,
    pub mean: f64,
    pub se: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub per_genome: Vec<GenomeValidation>,
    /// Mean win rate over all genomes, in percent.
    pub percent: f64,
}

/// Replays each recommended genome for `config.validate_games` games of
/// `config.p1` against `config.p2`. A genome's games depend only on the seed,
/// the genome and the game index, so listing a genome twice gives the same
/// value twice.
pub fn validate(config: &ExperimentConfig, genomes: &[Genome]) -> Result<ValidationReport> {
    config.validate()?;
    if genomes.is_empty() {
        return Err(Error::EmptyRecommendations);
    }
    let space = config.space();
    let per_genome: Vec<GenomeValidation> = genomes
        .par_iter()
        .map(|g| {
            let params = params_from_genome(&space, g)?;
            let values = (0..config.validate_games)
                .map(|i| {
                    let mut words = vec![config.seed, VALIDATE_TAG];
                    words.extend(g.words());
                    words.push(u64::from(i));
                    let seeds = MatchSeeds::from_seed(seeds::derive(&words));
                    let outcome =
                        play_match(params, config.physics, &config.p1, &config.p2, seeds)?;
                    Ok(GameValue::from_outcome(&outcome).value())
                })
                .collect::<Result<Vec<f64>>>()?;
            let (mean, se) = mean_and_se(&values);
            Ok(GenomeValidation {
                genome: g.clone(),
                games: config.validate_games,
                mean,
                se,
            })
        })
        .collect::<Result<_>>()?;
    let percent = 100.0 * per_genome.iter().map(|v| v.mean).sum::<f64>() / per_genome.len() as f64;
    Ok(ValidationReport {
        per_genome,
        percent,
    })
}

/// Percentage with up to four decimals and no trailing zeros.
pub fn format_percent(p: f64) -> String {
    let s = format!("{p:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    format!("{s}%")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agents::AgentSpec;

    #[test]
    fn percent_formatting() {
        assert_eq!(format_percent(86.0), "86%");
        assert_eq!(format_percent(91.818181), "91.8182%");
        assert_eq!(format_percent(81.23), "81.23%");
    }

    #[test]
    fn empty_list_is_an_error() {
        let err = validate(&ExperimentConfig::default(), &[]).unwrap_err();
        assert!(matches!(err, Error::EmptyRecommendations));
    }

    #[test]
    fn duplicate_genomes_score_alike() {
        let config = ExperimentConfig {
            p1: AgentSpec::random(),
            p2: AgentSpec::ras(),
            validate_games: 5,
            ..ExperimentConfig::default()
        };
        let g: Genome = "0-0-0-0-7".parse().unwrap();
        let h: Genome = "0-0-0-0-0".parse().unwrap();
        let r = validate(&config, &[g.clone(), h, g]).unwrap();
        assert_eq!(r.per_genome[0], r.per_genome[2]);
        let mean = r.per_genome.iter().map(|v| v.mean).sum::<f64>() / 3.0;
        assert!((r.percent - 100.0 * mean).abs() < 1e-9);
    }
}
