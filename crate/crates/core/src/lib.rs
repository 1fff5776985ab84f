//! Simulation toolkit for strategic classification under a causal model.

pub mod agent;
pub mod counterfactual;
pub mod error;
pub mod experiment;
pub mod improvement;
pub mod incentive;
pub mod monotonic;
pub mod rng;
pub mod scm;
pub mod stats;

pub use error::{Error, Result};
