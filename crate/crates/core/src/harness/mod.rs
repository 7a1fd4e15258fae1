//! Experiment drivers behind the command-line tool.
//!
//! Every driver is deterministic given its [`ExperimentConfig`]: random
//! streams are derived from the base seed and the index of the unit of work,
//! and parallel results are merged by index.

mod bench;
mod config;
mod experiment;
pub mod output;
mod sweep;
mod validate;

pub use bench::{bench, BenchReport};
pub use config::{ExperimentConfig, RunSettings, SpaceKind};
pub use experiment::{optimize_experiment, CurvePoint, ExperimentOutput, TrialLog, TrialSummary};
pub use sweep::{
    between_group_variance, marginals, sweep, sweep_indices, MarginalRow, SweepRecord,
};
pub use validate::{format_percent, validate, GenomeValidation, ValidationReport};

use crate::{Error, Result};

/// Runs `f` on a rayon pool of `jobs` threads (0 = one per core).
pub fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidValue {
            key: "jobs".into(),
            message: e.to_string(),
        })?;
    Ok(pool.install(f))
}

// Domain tags mixed into derived seeds so the streams of different drivers
// never coincide.
const SWEEP_TAG: u64 = 0x5357_4545_5000_0001;
const TRIAL_TAG: u64 = 0x5452_4941_4c00_0002;
const AUDIT_TAG: u64 = 0x4155_4449_5400_0003;
const VALIDATE_TAG: u64 = 0x5641_4c49_4400_0004;
const SAMPLE_TAG: u64 = 0x5341_4d50_4c00_0005;
