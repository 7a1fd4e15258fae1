//! Discrete search spaces and the genomes that index into them.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// One searchable dimension: a name and its ordered legal values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dimension {
    pub name: String,
    pub values: Vec<f64>,
}

impl Dimension {
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Self {
        Self {
            name: name.into(),
            values,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// A product of finite dimensions, each with at least two distinct values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamSpace {
    dims: Vec<Dimension>,
}

pub const MAX_SHIP_SPEED: &str = "v_s";
pub const THRUST_SPEED: &str = "v_t";
pub const MAX_MISSILE_SPEED: &str = "v_m";
pub const COOLDOWN: &str = "d";
pub const MISSILE_COST: &str = "c";
pub const SHIP_RADIUS: &str = "sr";

impl ParamSpace {
    pub fn new(dims: Vec<Dimension>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidSpace("no dimensions".into()));
        }
        for dim in &dims {
            if dim.len() < 2 {
                return Err(Error::InvalidSpace(format!(
                    "dimension `{}` has fewer than two values",
                    dim.name
                )));
            }
            for (i, a) in dim.values.iter().enumerate() {
                if dim.values[..i].contains(a) {
                    return Err(Error::InvalidSpace(format!(
                        "dimension `{}` repeats value {a}",
                        dim.name
                    )));
                }
            }
        }
        Ok(Self { dims })
    }

    /// The primary five-parameter game space (14,400 points).
    pub fn game_5d() -> Self {
        Self::new(vec![
            Dimension::new(MAX_SHIP_SPEED, vec![4.0, 6.0, 8.0, 10.0]),
            Dimension::new(THRUST_SPEED, vec![1.0, 2.0, 3.0, 4.0, 5.0]),
            Dimension::new(MAX_MISSILE_SPEED, (1..=10).map(f64::from).collect()),
            Dimension::new(COOLDOWN, (1..=9).map(f64::from).collect()),
            Dimension::new(
                MISSILE_COST,
                vec![0.0, 1.0, 5.0, 10.0, 20.0, 50.0, 75.0, 100.0],
            ),
        ])
        .expect("static space is valid")
    }

    /// The five game parameters plus ship radius (72,000 points).
    pub fn game_6d() -> Self {
        let mut dims = Self::game_5d().dims;
        dims.push(Dimension::new(
            SHIP_RADIUS,
            vec![10.0, 20.0, 30.0, 40.0, 50.0],
        ));
        Self::new(dims).expect("static space is valid")
    }

    /// `dims` binary dimensions with values {0, 1}.
    pub fn binary(dims: usize) -> Result<Self> {
        Self::new(
            (0..dims)
                .map(|d| Dimension::new(format!("b{d}"), vec![0.0, 1.0]))
                .collect(),
        )
    }

    pub fn dims(&self) -> &[Dimension] {
        &self.dims
    }

    /// Number of dimensions.
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn arity(&self, dim: usize) -> usize {
        self.dims[dim].len()
    }

    pub fn dim_index(&self, name: &str) -> Result<usize> {
        self.dims
            .iter()
            .position(|d| d.name == name)
            .ok_or_else(|| Error::UnknownDimension(name.to_string()))
    }

    /// Total number of points.
    pub fn size(&self) -> u64 {
        self.dims.iter().map(|d| d.len() as u64).product()
    }

    pub fn validate(&self, genome: &Genome) -> Result<()> {
        if genome.len() != self.len() {
            return Err(Error::GenomeLength {
                expected: self.len(),
                got: genome.len(),
            });
        }
        for (dim, (&index, d)) in genome.0.iter().zip(&self.dims).enumerate() {
            if index >= d.len() {
                return Err(Error::GeneOutOfRange {
                    dim,
                    index,
                    len: d.len(),
                });
            }
        }
        Ok(())
    }

    /// Values selected by `genome`, one per dimension.
    pub fn values(&self, genome: &Genome) -> Result<Vec<f64>> {
        self.validate(genome)?;
        Ok(genome
            .0
            .iter()
            .zip(&self.dims)
            .map(|(&i, d)| d.values[i])
            .collect())
    }

    pub fn random_genome<R: Rng + ?Sized>(&self, rng: &mut R) -> Genome {
        Genome(
            self.dims
                .iter()
                .map(|d| rng.gen_range(0..d.len()))
                .collect(),
        )
    }

    /// Mixed-radix decoding; the last dimension varies fastest.
    pub fn genome_at(&self, mut rank: u64) -> Genome {
        let mut indices = vec![0; self.len()];
        for (slot, d) in indices.iter_mut().zip(&self.dims).rev() {
            let n = d.len() as u64;
            *slot = (rank % n) as usize;
            rank /= n;
        }
        Genome(indices)
    }

    pub fn rank_of(&self, genome: &Genome) -> u64 {
        genome
            .0
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&i, d)| acc * d.len() as u64 + i as u64)
    }

    pub fn genomes(&self) -> impl Iterator<Item = Genome> + '_ {
        (0..self.size()).map(|rank| self.genome_at(rank))
    }
}

/// One value index per dimension of a [`ParamSpace`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Genome(pub Vec<usize>);

impl Genome {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    /// Number of positions where the two genomes differ.
    pub fn hamming(&self, other: &Genome) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }

    pub fn words(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().map(|&i| i as u64)
    }
}

impl fmt::Display for Genome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("-")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Genome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split(['-', ',', ' '])
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>().map_err(|e| Error::InvalidValue {
                    key: "genome".into(),
                    message: format!("`{t}`: {e}"),
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(Genome)
    }
}

/// Serializes a [`Genome`] as its dash-joined text, for flat formats such
/// as CSV. Use with `#[serde(with = "genome_text")]`.
pub mod genome_text {
    use super::Genome;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(g: &Genome, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(g)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Genome, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(D::Error::custom)
    }
}
