//! Experiment harness for the HAPS ISAC simulator: scenario files, run kinds, CSV output
//! and run manifests. The `isacsim` binary is a thin command-line layer over this crate.

pub mod error;
pub mod experiment;
pub mod output;
pub mod scenario_file;
pub mod seeds;
pub mod selftest;

pub use error::{exit, CliError};
pub use experiment::{run, ExperimentSpec, RunKind, RunSummary, ScenarioSource};
pub use seeds::parse_seeds;
