//! Configuration, experiment orchestration and the verification suites
//! behind the `agora` command-line tool.

pub mod config;
pub mod experiment;
pub mod suites;

pub use config::ExperimentConfig;
pub use experiment::{build_input, resolve_workers, run_experiment, write_outputs, RunReport, RunSummary};
pub use suites::{run_suite, SuiteOptions, SuiteReport, SUITES};
