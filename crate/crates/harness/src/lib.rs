//! Experiment runner and output for the graphcanon command-line tool.

pub mod emit;
pub mod error;
pub mod experiments;
pub mod oracle;
pub mod pexpr;
pub mod spec;

pub use error::HarnessError;
pub use experiments::{run, sweep, trial_graph, Outcome, Summary, SweepPoint, TrialRecord};
pub use spec::{Adversary, Direction, ExperimentKind, ExperimentSpec, Params, SprinkleMode, Threshold};
