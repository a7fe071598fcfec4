use alloc::vec::Vec;

use super::AnalysisError;
use crate::function::{Bivariate, BivariateFn, ProfileFunction};
use crate::math;

/// Compatibility residual of `u_t = A_x`, `v_t = B_x` restricted to a
/// level set of `φ`:
/// `B_u φ_v² + (A_u − B_v) φ_u φ_v − A_v φ_u²`.
pub fn g4_residual(
    a: &impl Bivariate,
    b: &impl Bivariate,
    phi: &impl Bivariate,
    u: f64,
    v: f64,
) -> Result<f64, AnalysisError> {
    let [pu, pv] = phi.gradient(u, v);
    if pv == 0.0 {
        return Err(AnalysisError::DegenerateConstraint { u, v });
    }
    let [au, av] = a.gradient(u, v);
    let [bu, bv] = b.gradient(u, v);
    Ok(bu * pv * pv + (au - bv) * pu * pv - av * pu * pu)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompatibilityReport {
    /// g4 residual at each sample.
    pub g4: Vec<f64>,
    pub g4_max: f64,
    /// `k = A_u − A_v φ_u/φ_v` at each sample.
    pub k: Vec<f64>,
    /// Population variance of `k`; zero exactly when `k` is constant.
    pub g5_variance: f64,
}

/// g4 at every sample and the spread of the g5 coefficient `k`. For the
/// linearity statement to apply the samples should lie on one level set.
pub fn compatibility_residuals(
    a: &impl Bivariate,
    b: &impl Bivariate,
    phi: &impl Bivariate,
    samples: &[(f64, f64)],
) -> Result<CompatibilityReport, AnalysisError> {
    if samples.is_empty() {
        return Err(AnalysisError::EmptySamples);
    }
    let mut g4 = Vec::with_capacity(samples.len());
    let mut k = Vec::with_capacity(samples.len());
    for &(u, v) in samples {
        g4.push(g4_residual(a, b, phi, u, v)?);
        let [pu, pv] = phi.gradient(u, v);
        let [au, av] = a.gradient(u, v);
        k.push(au - av * pu / pv);
    }
    let n = k.len() as f64;
    let mean = k.iter().sum::<f64>() / n;
    let g5_variance = k.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    let g4_max = g4.iter().fold(0.0f64, |m, x| m.max(math::abs(*x)));
    Ok(CompatibilityReport {
        g4,
        g4_max,
        k,
        g5_variance,
    })
}

/// The flux pair `A = H(φ)u + Φ(φ)`, `B = H(φ)v + Ψ(φ)`.
#[derive(Debug, Clone)]
pub struct CompatibleFlux {
    pub h: ProfileFunction,
    pub big_phi: ProfileFunction,
    pub psi: ProfileFunction,
    pub level: BivariateFn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Which {
    A,
    B,
}

/// One component of a [`CompatibleFlux`], usable wherever a
/// [`Bivariate`] is expected.
#[derive(Debug, Clone, Copy)]
pub struct FluxComponent<'a> {
    flux: &'a CompatibleFlux,
    which: Which,
}

impl CompatibleFlux {
    pub fn a(&self) -> FluxComponent<'_> {
        FluxComponent {
            flux: self,
            which: Which::A,
        }
    }

    pub fn b(&self) -> FluxComponent<'_> {
        FluxComponent {
            flux: self,
            which: Which::B,
        }
    }
}

impl Bivariate for FluxComponent<'_> {
    fn value(&self, u: f64, v: f64) -> f64 {
        let f = self.flux;
        let w = f.level.value(u, v);
        match self.which {
            Which::A => f.h.value(w) * u + f.big_phi.value(w),
            Which::B => f.h.value(w) * v + f.psi.value(w),
        }
    }

    fn gradient(&self, u: f64, v: f64) -> [f64; 2] {
        let f = self.flux;
        let w = f.level.value(u, v);
        let [wu, wv] = f.level.gradient(u, v);
        let (h, dh) = (f.h.value(w), f.h.d1(w));
        match self.which {
            Which::A => {
                let d = f.big_phi.d1(w);
                [dh * wu * u + h + d * wu, dh * wv * u + d * wv]
            }
            Which::B => {
                let d = f.psi.d1(w);
                [dh * wu * v + d * wu, dh * wv * v + h + d * wv]
            }
        }
    }
}

pub fn construct_temple_flux(
    h: ProfileFunction,
    big_phi: ProfileFunction,
    psi: ProfileFunction,
    phi: BivariateFn,
) -> CompatibleFlux {
    CompatibleFlux {
        h,
        big_phi,
        psi,
        level: phi,
    }
}
