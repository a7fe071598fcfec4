use alloc::vec::Vec;

use super::residual::{check_levels, interior, Accumulator, Stencil, DEFAULT_TARGET};
use super::{ResidualReport, VerifyError};
use crate::function::ProfileFunction;
use crate::state::SampledField;

/// Hydrodynamic conservation law with densities
/// `X = −c1′ρ² − 3c1ρ − c2ρ` and `T = β(−3c1′ρ⁴ − 3c1ρ³ − c2ρ³)`.
#[derive(Debug, Clone)]
pub struct ConservationSpec {
    /// Function of `ρ`.
    pub cons1: ProfileFunction,
    /// Function of `θ`.
    pub cons2: ProfileFunction,
}

impl ConservationSpec {
    pub fn new(cons1: ProfileFunction, cons2: ProfileFunction) -> Self {
        Self { cons1, cons2 }
    }

    /// `(X, T)` densities at one state.
    pub fn densities(&self, beta: f64, theta: f64, rho: f64) -> (f64, f64) {
        let c1 = self.cons1.value(rho);
        let dc1 = self.cons1.d1(rho);
        let c2 = self.cons2.value(theta);
        let r2 = rho * rho;
        let x = -dc1 * r2 - 3.0 * c1 * rho - c2 * rho;
        let t = beta * (-3.0 * dc1 * r2 * r2 - 3.0 * c1 * r2 * rho - c2 * r2 * rho);
        (x, t)
    }
}

/// Which pairing of derivatives with densities was measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// `D_X[X] − D_τ[T]`
    XdensityAlongX,
    /// `D_τ[X] − D_X[T]`
    XdensityAlongTau,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConservationReport {
    pub along_x: ResidualReport,
    pub along_tau: ResidualReport,
    /// The orientation that passed; `XdensityAlongX` is preferred when both
    /// pass.
    pub decaying: Orientation,
    /// Both orientations passed (e.g. when every density is constant on the
    /// field), so the data cannot discriminate.
    pub ambiguous: bool,
}

impl ConservationReport {
    pub fn decaying_report(&self) -> &ResidualReport {
        match self.decaying {
            Orientation::XdensityAlongX => &self.along_x,
            Orientation::XdensityAlongTau => &self.along_tau,
        }
    }
}

/// Evaluates both orientations of the conservation law on fields
/// `"theta"`, `"rho"` over `(X, τ)`.
pub fn conservation_residual(
    levels: &[SampledField],
    beta: f64,
    spec: &ConservationSpec,
) -> Result<ConservationReport, VerifyError> {
    check_levels(levels)?;
    let mut along_x = Vec::with_capacity(levels.len());
    let mut along_tau = Vec::with_capacity(levels.len());
    for f in levels {
        let th = f.field("theta").ok_or(VerifyError::MissingField("theta"))?;
        let rh = f.field("rho").ok_or(VerifyError::MissingField("rho"))?;
        let (xs, ts): (Vec<f64>, Vec<f64>) = th
            .iter()
            .zip(rh)
            .map(|(t, r)| spec.densities(beta, *t, *r))
            .unzip();
        let xd = Stencil::from_slice(&xs, f);
        let td = Stencil::from_slice(&ts, f);
        let (hr, hc) = (f.rows().step, f.cols().step);
        let mut a = Accumulator::default();
        let mut b = Accumulator::default();
        for r in interior(f.rows().len) {
            for c in interior(f.cols().len) {
                // Density magnitudes over h bound the roundoff of the
                // differences, so constant densities count as exact.
                let (sx, st) = (xd.at(r, c) / hr, td.at(r, c) / hc);
                let (p, q) = (xd.d_row(r, c), td.d_col(r, c));
                a.push(p - q, &[p, q, sx, st]);
                let (sx, st) = (xd.at(r, c) / hc, td.at(r, c) / hr);
                let (p, q) = (xd.d_col(r, c), td.d_row(r, c));
                b.push(p - q, &[p, q, sx, st]);
            }
        }
        let h = f.cols().step;
        along_x.push(a.finish(h));
        along_tau.push(b.finish(h));
    }
    let along_x = ResidualReport::from_levels(along_x, DEFAULT_TARGET);
    let along_tau = ResidualReport::from_levels(along_tau, DEFAULT_TARGET);
    let decaying = match (along_x.pass, along_tau.pass) {
        (true, _) => Orientation::XdensityAlongX,
        (false, true) => Orientation::XdensityAlongTau,
        (false, false) => {
            return Err(VerifyError::NeitherOrientationDecays {
                order_a: along_x.order,
                order_b: along_tau.order,
            })
        }
    };
    let ambiguous = along_x.pass && along_tau.pass;
    Ok(ConservationReport {
        along_x,
        along_tau,
        decaying,
        ambiguous,
    })
}
