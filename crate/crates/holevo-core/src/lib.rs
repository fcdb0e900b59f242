//! Numerical laboratory for finite-dimensional quantum information:
//! channel-induced ensembles and their accessible-information bounds,
//! Naimark dilation, fidelity correlation matrices, and positivity of
//! structured block operators — together with a seeded verification harness
//! that exercises each claim on randomized instances.

pub mod blockpos;
pub mod channel;
pub mod config;
pub mod ensemble;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod state;

pub use config::Tolerances;
pub use error::{Error, Result};
