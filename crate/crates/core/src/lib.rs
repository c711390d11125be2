//! Simulation of feedback-driven entropy collapse on the probability simplex.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod metrics;
pub mod report;
pub mod rng;
pub mod simplex;

pub use dynamics::{BetaSchedule, DynamicsParams, StepRecord, Trajectory, UpdateRule};
pub use error::{Error, Result};
pub use metrics::EntropyMeasure;
pub use rng::RngStream;
pub use simplex::StateDistribution;
pub use config::{ExperimentConfig, ExperimentKind};
pub use experiments::Regime;
