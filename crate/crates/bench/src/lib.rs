//! File formats, timing and experiment driver for `graal-core`.

pub mod defaults;
pub mod edgelist;
pub mod experiment;
pub mod libsvm;

pub use experiment::{run_experiment, ExperimentConfig, ProblemSpec, RunSummary};
