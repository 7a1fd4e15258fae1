//! Seed derivation.
//!
//! Every random stream in the workbench is a `ChaCha8Rng` seeded from a `u64`
//! obtained by hashing a base seed with the coordinates of the thing being
//! seeded (trial index, genome, resample index, ...). Streams derived this way
//! do not depend on scheduling, so parallel and serial runs agree.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Order-sensitive hash of a sequence of words.
pub fn derive(words: &[u64]) -> u64 {
    words.iter().fold(0x6a09_e667_f3bc_c909, |acc, &w| {
        splitmix64(acc ^ splitmix64(w))
    })
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
