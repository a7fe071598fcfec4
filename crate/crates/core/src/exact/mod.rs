//! Closed-form solution families, evaluable pointwise on `(x, t)` or
//! `(X, τ)` and used as oracles by the solver and verification modules.

mod carroll;
mod hodograph;
mod polar;
mod temple;

use thiserror::Error;

use crate::constitutive::ConstitutiveError;
use crate::state::GridError;

pub use carroll::{
    carroll_dispersion, eval_generalized_carroll, CarrollWave, GeneralizedCarroll, Sign,
};
pub use hodograph::{
    hodograph_field, hodograph_forward, hodograph_invert, hodograph_jacobian, HodographData,
};
pub use polar::{
    eval_asymptotic_linear, eval_simple_wave, potential_phi, simple_wave_column, simple_wave_field,
    Potential,
};
pub use temple::{eval_overdetermined, eval_separable, SeparableSolution};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExactError {
    #[error(transparent)]
    Constitutive(#[from] ConstitutiveError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("ω = {omega} violates the dispersion relation (expected {expected})")]
    DispersionMismatch { omega: f64, expected: f64 },
    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),
    #[error("implicit solve did not converge at X = {x}, τ = {tau}")]
    NoConvergence { x: f64, tau: f64 },
    #[error("hodograph Jacobian is singular at θ = {theta}, ρ = {rho}")]
    SingularJacobian { theta: f64, rho: f64 },
    #[error("hodograph fold crossed near X = {x}, τ = {tau}")]
    FoldCrossed { x: f64, tau: f64 },
    #[error("ODE step failed at t = {t}")]
    StepFailure { t: f64 },
    #[error("flux is not of the product form P = P(uv)")]
    NotProductForm,
    #[error("field is missing \"{0}\"")]
    MissingField(&'static str),
    #[error("quadrature paths disagree by {discrepancy:e}, allowed {allowed:e}")]
    InconsistentField { discrepancy: f64, allowed: f64 },
}
