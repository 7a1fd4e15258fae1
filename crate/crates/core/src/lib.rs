//! Skill-depth tuning workbench.
//!
//! A deterministic two-player space-battle forward model ([`game`]), a set of
//! play-testing agents ([`agents`]), a noisy win-rate fitness built on top of
//! them ([`evaluation`]), two resampling hill climbers ([`optimizers`]) and the
//! experiment drivers used by the command-line tool ([`harness`]).

pub mod agents;
pub mod error;
pub mod evaluation;
pub mod game;
pub mod harness;
pub mod optimizers;
pub mod seeds;
pub mod space;

pub use error::{Error, Result};
pub use space::{Genome, ParamSpace};
