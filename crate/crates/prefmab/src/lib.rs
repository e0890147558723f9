//! Simulation library for preference-aware multi-objective multi-armed
//! bandits: N users with stochastic preference vectors over D objectives
//! pick among K arms with stochastic vector rewards. Policies observe the
//! reward vector and the scalar overall reward (preference dot reward) and
//! are scored by preference-weighted regret against the best available arm.
//!
//! The crate provides the preference-aware UCB family (hidden, revealed,
//! and known preferences), preference-free and scalarized baselines, the
//! experiment harness with deterministic seeded streams, and small
//! plotting and estimator-demo utilities used by the CLI.

pub mod config;
pub mod demo;
pub mod env;
pub mod error;
pub mod estimators;
pub mod harness;
pub mod linalg;
pub mod metrics;
pub mod pareto;
pub mod plot;
pub mod policies;
pub mod rng;
pub mod stats;
pub mod types;

pub use error::{Error, Result};
