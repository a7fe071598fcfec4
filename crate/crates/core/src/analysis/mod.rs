//! Structure of the Temple family `u_t = [P u]_x`, `v_t = [P v]_x` and of
//! the general class `u_t = A_x`, `v_t = B_x`: eigenstructure, degeneracy
//! flags, linearity conditions on level sets, and the diagonal form.

mod classify;
mod compat;
mod diagonal;
mod eigen;

use thiserror::Error;

pub use classify::{classify, ClassificationReport, Flag, FlagState};
pub use compat::{
    compatibility_residuals, construct_temple_flux, g4_residual, CompatibilityReport,
    CompatibleFlux, FluxComponent,
};
pub use diagonal::{
    diagonal_form, symmetry_coefficient_s2, uv_effective_speed, DiagonalForm, S2Samples,
    SpeedRelation,
};
pub use eigen::{temple_eigen, EigenReport};

/// Flag thresholds shared by every degeneracy test.
pub const SET_THRESHOLD: f64 = 1e-8;
pub const CLEAR_THRESHOLD: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("eigenvector is undefined at ({u}, {v})")]
    DegenerateDirection { u: f64, v: f64 },
    #[error("(α, u/v) chart is singular at ({u}, {v})")]
    ChartFailure { u: f64, v: f64 },
    #[error("P differs from R(α) by {residual:e} at ({u}, {v})")]
    ChartMismatch { u: f64, v: f64, residual: f64 },
    #[error("φ_v vanishes at ({u}, {v})")]
    DegenerateConstraint { u: f64, v: f64 },
    #[error("characteristic speeds coincide at α = {alpha}")]
    CoincidenceOfSpeeds { alpha: f64 },
    #[error("no sample points given")]
    EmptySamples,
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}
