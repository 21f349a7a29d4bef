//! Randomized verification of petz-core: trial generation, evaluation,
//! aggregation, persistence and replay.

pub mod check;
pub mod config;
pub mod data;
pub mod demo;
mod error;
pub mod family;
pub mod seed;
pub mod suite;
pub mod trial;

pub use check::Check;
pub use config::{HarnessConfig, OutputFormat};
pub use error::HarnessError;
pub use family::Family;
pub use suite::{run_suite, Summary, SuiteOutcome};
pub use trial::{evaluate, replay, Judging, ReplayFile, TrialInstance, TrialReport};
