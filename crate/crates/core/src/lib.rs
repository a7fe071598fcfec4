//! Exact solution families, degeneracy analysis, finite-volume evolution
//! and discrete verification for 1+1 nonlinear shear-wave elastodynamics:
//! the full strain system, its first-order asymptotic model, and the
//! enclosing Temple class `u_t = [P(u,v) u]_x`, `v_t = [P(u,v) v]_x`.
//!
//! The crate is `no_std` and needs only `alloc`.

#![cfg_attr(not(test), no_std)]
// Validation is written as `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod math;
mod newton;

pub mod analysis;
pub mod constitutive;
pub mod exact;
pub mod function;
pub mod simulate;
pub mod state;
pub mod verify;

pub use constitutive::{
    beta_from_moduli, AsymptoticCoefficients, ConstitutiveError, ShearModulus, SpeedConvention,
    TempleFlux,
};
pub use function::{Bivariate, BivariateFn, ProfileFunction};
pub use state::{
    Axis, Boundary, FullState, Grid1D, GridError, PolarState, SampledField, StateGrid, StrainState,
};
