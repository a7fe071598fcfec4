//! Exact solutions of the second-order Temple-class wave system
//! `U_tt = [P(U,V)U]_xx`, `V_tt = [P(U,V)V]_xx`.

use alloc::vec::Vec;

use super::{ExactError, Sign};
use crate::constitutive::TempleFlux;
use crate::function::{Bivariate, BivariateFn, ProfileFunction};
use crate::math;
use crate::state::StrainState;

/// Level-set solution: `U = F(x ± √A t)` and `V = Ψ(U; A)` with
/// `P(U, Ψ) = A`, found inside `v_bracket`.
pub fn eval_overdetermined(
    flux: &TempleFlux,
    level: f64,
    profile: &ProfileFunction,
    direction: Sign,
    x: f64,
    t: f64,
    v_bracket: (f64, f64),
) -> Result<StrainState, ExactError> {
    if !(level > 0.0) {
        return Err(ExactError::InvalidParameter("level A must be positive"));
    }
    let u = profile.value(x + direction.value() * math::sqrt(level) * t);
    let v = flux.solve_level_set(level, u, v_bracket)?;
    Ok(StrainState { u, v })
}

/// Whether `P` depends on `(u, v)` only through `uv`.
fn is_product_form(p: &BivariateFn) -> bool {
    match p {
        BivariateFn::Const(_) | BivariateFn::Product | BivariateFn::ProductForm(_) => true,
        BivariateFn::Poly(c) => c
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, &cij)| i == j || cij == 0.0)),
        _ => false,
    }
}

/// Solution `u = φ(t)e^{kx}`, `v = φ(t)e^{−kx}` sampled at the nodes of a
/// time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableSolution {
    pub k: f64,
    pub t: Vec<f64>,
    pub phi: Vec<f64>,
    pub dphi: Vec<f64>,
}

impl SeparableSolution {
    /// `(u, v)` at grid node `i` and position `x`.
    pub fn eval(&self, i: usize, x: f64) -> StrainState {
        let e = math::exp(self.k * x);
        StrainState {
            u: self.phi[i] * e,
            v: self.phi[i] / e,
        }
    }

    pub fn u(&self, i: usize) -> impl Fn(f64) -> f64 + '_ {
        move |x| self.eval(i, x).u
    }

    pub fn v(&self, i: usize) -> impl Fn(f64) -> f64 + '_ {
        move |x| self.eval(i, x).v
    }
}

/// Integrates `φ″ = k²P(φ²)φ` with classical RK4 on the nodes of
/// `t_grid`, which must be strictly increasing and start at the time of
/// the initial data.
pub fn eval_separable(
    flux: &TempleFlux,
    k: f64,
    phi0: f64,
    dphi0: f64,
    t_grid: &[f64],
) -> Result<SeparableSolution, ExactError> {
    let p = flux.function();
    if !is_product_form(p) {
        return Err(ExactError::NotProductForm);
    }
    if t_grid.is_empty() || t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(ExactError::InvalidParameter(
            "time grid must be strictly increasing",
        ));
    }
    // P(φ, φ) = P̂(φ²) for product-form fluxes.
    let k2 = k * k;
    let rhs = |y: [f64; 2]| [y[1], k2 * p.value(y[0], y[0]) * y[0]];
    let mut y = [phi0, dphi0];
    let mut phi = Vec::with_capacity(t_grid.len());
    let mut dphi = Vec::with_capacity(t_grid.len());
    phi.push(phi0);
    dphi.push(dphi0);
    for w in t_grid.windows(2) {
        let h = w[1] - w[0];
        let k1 = rhs(y);
        let k2v = rhs([y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
        let k3 = rhs([y[0] + 0.5 * h * k2v[0], y[1] + 0.5 * h * k2v[1]]);
        let k4 = rhs([y[0] + h * k3[0], y[1] + h * k3[1]]);
        for c in 0..2 {
            y[c] += h / 6.0 * (k1[c] + 2.0 * k2v[c] + 2.0 * k3[c] + k4[c]);
        }
        if !(y[0].is_finite() && y[1].is_finite() && math::abs(y[0]) < 1e150) {
            return Err(ExactError::StepFailure { t: w[1] });
        }
        phi.push(y[0]);
        dphi.push(y[1]);
    }
    Ok(SeparableSolution {
        k,
        t: t_grid.to_vec(),
        phi,
        dphi,
    })
}
