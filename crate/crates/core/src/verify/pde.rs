use super::residual::{interior, study, Accumulator, Stencil, DEFAULT_TARGET};
use super::{ResidualReport, VerifyError};
use crate::constitutive::{ShearModulus, TempleFlux};
use crate::function::Bivariate;
use crate::state::SampledField;

/// Shared driver for second-order wave residuals `W_tt − [c(U,V) W]_xx`
/// on fields `"U"`, `"V"` over `(t, x)`.
fn wave_residual(
    levels: &[SampledField],
    coefficient: impl Fn(f64, f64) -> f64,
) -> Result<ResidualReport, VerifyError> {
    study(levels, DEFAULT_TARGET, |f| {
        let u = Stencil::new(f, "U")?;
        let v = Stencil::new(f, "V")?;
        let (nr, nc) = (f.rows().len, f.cols().len);
        let hx = f.cols().step;
        let mut acc = Accumulator::default();
        for r in interior(nr) {
            for c in interior(nc) {
                let flux = |cc: usize| {
                    let (a, b) = (u.at(r, cc), v.at(r, cc));
                    let k = coefficient(a, b);
                    (k * a, k * b)
                };
                let (lm, l0, lp) = (flux(c - 1), flux(c), flux(c + 1));
                let fu = (lp.0 - 2.0 * l0.0 + lm.0) / (hx * hx);
                let fv = (lp.1 - 2.0 * l0.1 + lm.1) / (hx * hx);
                let (utt, vtt) = (u.dd_row(r, c), v.dd_row(r, c));
                acc.push(utt - fu, &[utt, fu]);
                acc.push(vtt - fv, &[vtt, fv]);
            }
        }
        Ok(acc.finish(hx))
    })
}

/// Residual of `U_tt = [Q̃(U²+V²) U]_xx`, `V_tt = [Q̃ V]_xx`, the strain
/// form of the full system, on fields `"U"`, `"V"` (rows `t`, columns `x`).
pub fn residual_full(
    levels: &[SampledField],
    m: &ShearModulus,
) -> Result<ResidualReport, VerifyError> {
    let rho = m.rho();
    wave_residual(levels, |a, b| m.law().value(a * a + b * b) / rho)
}

/// Residual of `U_tt = [P U]_xx`, `V_tt = [P V]_xx` on fields `"U"`, `"V"`.
pub fn residual_temple(
    levels: &[SampledField],
    flux: &TempleFlux,
) -> Result<ResidualReport, VerifyError> {
    wave_residual(levels, |a, b| flux.function().value(a, b))
}

/// Residual of the asymptotic system over `(X, τ)`. Fields `"theta"` and
/// `"rho"` select the polar form `θ_X − βρ²θ_τ`, `ρ_X − 3βρ²ρ_τ`;
/// otherwise `"U"`, `"V"` select the conservative strain form.
pub fn residual_asymptotic(
    levels: &[SampledField],
    beta: f64,
) -> Result<ResidualReport, VerifyError> {
    study(levels, DEFAULT_TARGET, |f| {
        let (nr, nc) = (f.rows().len, f.cols().len);
        let h = f.cols().step;
        let mut acc = Accumulator::default();
        if f.field("theta").is_some() && f.field("rho").is_some() {
            let th = Stencil::new(f, "theta")?;
            let rh = Stencil::new(f, "rho")?;
            for r in interior(nr) {
                for c in interior(nc) {
                    let p = rh.at(r, c);
                    let a = th.d_row(r, c);
                    let b = beta * p * p * th.d_col(r, c);
                    acc.push(a - b, &[a, b]);
                    let a = rh.d_row(r, c);
                    let b = 3.0 * beta * p * p * rh.d_col(r, c);
                    acc.push(a - b, &[a, b]);
                }
            }
        } else {
            let u = Stencil::new(f, "U")?;
            let v = Stencil::new(f, "V")?;
            for r in interior(nr) {
                for c in interior(nc) {
                    let flux = |cc: usize| {
                        let (a, b) = (u.at(r, cc), v.at(r, cc));
                        let s = beta * (a * a + b * b);
                        (s * a, s * b)
                    };
                    let (lm, lp) = (flux(c - 1), flux(c + 1));
                    let (fu, fv) = ((lp.0 - lm.0) / (2.0 * h), (lp.1 - lm.1) / (2.0 * h));
                    let (ux, vx) = (u.d_row(r, c), v.d_row(r, c));
                    acc.push(ux - fu, &[ux, fu]);
                    acc.push(vx - fv, &[vx, fv]);
                }
            }
        }
        Ok(acc.finish(h))
    })
}
