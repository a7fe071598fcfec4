//! Discrete verification of the structural identities: PDE residuals,
//! conservation laws, linearized symmetries, the symmetry commutator and
//! solver convergence studies.
//!
//! Residual operations take a slice of sampled fields on strictly nested
//! grids (each level halves both steps of the previous one over the same
//! span), evaluate centered second-order stencils on the interior with two
//! boundary layers dropped, and fit a decay order to the L∞ norms.

mod conservation;
mod convergence;
mod pde;
mod residual;
mod symmetry;

use alloc::string::String;
use thiserror::Error;

use crate::exact::ExactError;
use crate::simulate::SimulateError;

pub use conservation::{conservation_residual, ConservationReport, ConservationSpec, Orientation};
pub use convergence::{
    convergence_study, fit_order, restrict_average, ConvergenceLevel, ConvergenceReport, Reference,
};
pub use pde::{residual_asymptotic, residual_full, residual_temple};
pub use residual::{nested_levels, LevelNorms, ResidualReport, DEFAULT_TARGET};
pub use symmetry::{
    commutator_residual, linearized_symmetry_residual, Characteristic, CommutatorReport,
    FirstOrderSymmetry, HydrodynamicSymmetry, Jet, Perturbed, TauSquared,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("need at least {need} levels, got {got}")]
    TooFewLevels { need: usize, got: usize },
    #[error("level {level} is not a uniform halving of the previous level")]
    NotNested { level: usize },
    #[error("need at least 5 snapshots along the evolution axis, got {0}")]
    InsufficientSnapshots(usize),
    #[error("need at least 5 points along the spatial axis, got {0}")]
    InsufficientPoints(usize),
    #[error("field is missing \"{0}\"")]
    MissingField(&'static str),
    #[error("neither orientation decays (orders {order_a:.3} and {order_b:.3})")]
    NeitherOrientationDecays { order_a: f64, order_b: f64 },
    #[error("first-order symmetry constraint violated: residual {0:e}")]
    ConstraintViolated(f64),
    #[error("oracle failed: {0}")]
    OracleFailure(#[from] ExactError),
    #[error("solver failed: {0}")]
    SolverFailure(#[from] SimulateError),
    #[error("{0}")]
    Other(String),
}
