//! Structure-derived finite-difference simulation of the built-in models:
//! summation-by-parts stencils, banded linear algebra, implicit-midpoint
//! time stepping, and energy-balance audits of the computed trajectories.

pub mod audit;
pub mod band;
pub mod discretize;
pub mod model;
pub mod stencil;
pub mod step;
pub mod study;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("time-step system is singular (smallest pivot {0:.3e})")]
    Singular(f64),
    #[error("non-finite state detected at step {step}")]
    NonFinite { step: usize },
    #[error("invalid simulation setup: {0}")]
    Invalid(String),
}
