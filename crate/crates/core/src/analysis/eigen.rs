use super::AnalysisError;
use crate::constitutive::TempleFlux;

/// Eigenstructure of the Temple system at one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenReport {
    pub state: (f64, f64),
    /// `P + uP_u + vP_v`
    pub lambda1: f64,
    /// `P`
    pub lambda2: f64,
    pub d1: [f64; 2],
    pub d2: [f64; 2],
    pub grad_lambda1: [f64; 2],
    pub grad_lambda2: [f64; 2],
    /// `∇λ1·d1`
    pub ld1: f64,
    /// `∇λ2·d2`
    pub ld2: f64,
    /// `d1` is the projective limit `(0, 1)` because `u = 0`.
    pub d1_projective: bool,
    /// `d2` is the projective limit `(0, 1)` because `P_v = 0`.
    pub d2_projective: bool,
    /// `∇P = 0`: every direction is an eigenvector for `λ2`; `d2 = (1, 0)`.
    pub d2_arbitrary: bool,
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

pub fn temple_eigen(f: &TempleFlux, u: f64, v: f64) -> Result<EigenReport, AnalysisError> {
    let p = f.function();
    let pv = crate::function::Bivariate::value(p, u, v);
    let [pu, pvv] = f.partials(u, v);
    let [[huu, huv], [_, hvv]] = f.hessian(u, v);

    let lambda2 = pv;
    let lambda1 = pv + u * pu + v * pvv;
    let grad_lambda2 = [pu, pvv];
    let grad_lambda1 = [2.0 * pu + u * huu + v * huv, 2.0 * pvv + u * huv + v * hvv];

    let (d1, d1_projective) = if u != 0.0 {
        ([1.0, v / u], false)
    } else if v != 0.0 {
        ([0.0, 1.0], true)
    } else {
        return Err(AnalysisError::DegenerateDirection { u, v });
    };
    let (d2, d2_projective, d2_arbitrary) = if pvv != 0.0 {
        ([1.0, -pu / pvv], false, false)
    } else if pu != 0.0 {
        ([0.0, 1.0], true, false)
    } else {
        ([1.0, 0.0], false, true)
    };

    Ok(EigenReport {
        state: (u, v),
        lambda1,
        lambda2,
        d1,
        d2,
        grad_lambda1,
        grad_lambda2,
        ld1: dot(grad_lambda1, d1),
        ld2: dot(grad_lambda2, d2),
        d1_projective,
        d2_projective,
        d2_arbitrary,
    })
}
