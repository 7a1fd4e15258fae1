//! Cheap objectives with a known optimum, used to check the climbers.

use rand_distr::{Distribution, Normal};

use crate::evaluation::NoisyFitness;
use crate::space::Genome;
use crate::Result;

/// Fraction of genes equal to 1 (index 1 of a binary dimension).
#[derive(Clone, Copy, Debug, Default)]
pub struct OneMax;

impl OneMax {
    pub fn value(genome: &Genome) -> f64 {
        genome.0.iter().filter(|&&g| g == 1).count() as f64 / genome.len() as f64
    }
}

impl NoisyFitness for OneMax {
    fn sample(&self, genome: &Genome, _seed: u64) -> Result<f64> {
        Ok(Self::value(genome))
    }
}

/// OneMax plus additive Gaussian noise of standard deviation `sigma`.
#[derive(Clone, Copy, Debug)]
pub struct NoisyOneMax {
    pub sigma: f64,
}

impl NoisyFitness for NoisyOneMax {
    fn sample(&self, genome: &Genome, seed: u64) -> Result<f64> {
        let noise = Normal::new(0.0, self.sigma).expect("sigma is finite and non-negative");
        Ok(OneMax::value(genome) + noise.sample(&mut crate::seeds::rng(seed)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn onemax_values() {
        assert_eq!(OneMax::value(&Genome(vec![1, 1, 0, 1, 0])), 0.6);
        assert_eq!(OneMax::value(&Genome(vec![1; 5])), 1.0);
    }

    #[test]
    fn noise_has_the_requested_spread() {
        let f = NoisyOneMax { sigma: 0.3 };
        let g = Genome(vec![1, 0, 1, 0, 1]);
        let xs: Vec<f64> = (0..20_000).map(|s| f.sample(&g, s).unwrap()).collect();
        let (mean, se) = crate::evaluation::mean_and_se(&xs);
        let sd = se * (xs.len() as f64).sqrt();
        assert!((mean - 0.6).abs() < 0.01);
        assert!((sd - 0.3).abs() < 0.01);
    }
}
