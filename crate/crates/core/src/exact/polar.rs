//! Solutions of the asymptotic system in polar form: the constant-modulus
//! family, plane-polarized simple waves and the potential `φ`.

use alloc::vec;
use alloc::vec::Vec;

use super::ExactError;
use crate::function::ProfileFunction;
use crate::math;
use crate::state::{Axis, SampledField, StrainState};

/// Constant-modulus solution `(A cos Θ(ξ), A sin Θ(ξ))`, `ξ = βA²X + τ`.
pub fn eval_asymptotic_linear(
    beta: f64,
    amplitude: f64,
    theta: &ProfileFunction,
    x: f64,
    tau: f64,
) -> StrainState {
    let xi = beta * amplitude * amplitude * x + tau;
    let th = theta.value(xi);
    StrainState {
        u: amplitude * math::cos(th),
        v: amplitude * math::sin(th),
    }
}

const NEWTON_ITER: usize = 60;
const CONTINUATION_ITER: usize = 12;
const MAX_HALVINGS: usize = 40;

/// Newton iteration on `g(ρ) = ρ − Φ(τ + 3βXρ²)`. Succeeds only on the
/// classical branch, where `g′ = 1 − 6βXρΦ′ > 0`.
fn simple_wave_newton(
    beta: f64,
    phi: &ProfileFunction,
    x: f64,
    tau: f64,
    seed: f64,
    max_iter: usize,
) -> Option<f64> {
    let mut r = seed;
    for _ in 0..max_iter {
        let xi = tau + 3.0 * beta * x * r * r;
        let g = r - phi.value(xi);
        let dg = 1.0 - 6.0 * beta * x * r * phi.d1(xi);
        if !(g.is_finite() && dg > 0.0) {
            return None;
        }
        let step = g / dg;
        r -= step;
        if math::abs(step) <= 1e-15 * r.abs().max(1.0) {
            break;
        }
    }
    let xi = tau + 3.0 * beta * x * r * r;
    let residual = math::abs(r - phi.value(xi));
    let dg = 1.0 - 6.0 * beta * x * r * phi.d1(xi);
    (residual <= 1e-12 * r.abs().max(1.0) && dg > 0.0).then_some(r)
}

/// `∂ρ/∂X` along the branch, from implicit differentiation.
fn branch_slope(beta: f64, phi: &ProfileFunction, x: f64, tau: f64, r: f64) -> f64 {
    let xi = tau + 3.0 * beta * x * r * r;
    let d = phi.d1(xi);
    3.0 * beta * r * r * d / (1.0 - 6.0 * beta * x * r * d)
}

/// Follows the smooth branch from `(x0, r0)` to `x1` with adaptive steps.
fn continue_branch(
    beta: f64,
    phi: &ProfileFunction,
    tau: f64,
    x0: f64,
    r0: f64,
    x1: f64,
) -> Result<f64, ExactError> {
    let fail = ExactError::NoConvergence { x: x1, tau };
    let (mut x, mut r) = (x0, r0);
    let span = x1 - x0;
    if span == 0.0 {
        return Ok(r);
    }
    let mut dx = span / 8.0;
    let mut halvings: usize = 0;
    while (x1 - x) * span.signum() > 0.0 {
        if (x + dx - x1) * span.signum() > 0.0 {
            dx = x1 - x;
        }
        let predictor = r + branch_slope(beta, phi, x, tau, r) * dx;
        let xn = if (x + dx - x1).abs() <= 1e-15 * x1.abs() {
            x1
        } else {
            x + dx
        };
        let accepted = simple_wave_newton(beta, phi, xn, tau, predictor, CONTINUATION_ITER)
            .filter(|rn| math::abs(rn - predictor) <= 0.05 * r.abs().max(1e-3));
        match accepted {
            Some(rn) => {
                x = xn;
                r = rn;
                dx *= 2.0;
                halvings = halvings.saturating_sub(1);
            }
            None => {
                halvings += 1;
                if halvings > MAX_HALVINGS {
                    return Err(fail);
                }
                dx *= 0.5;
            }
        }
    }
    Ok(r)
}

fn check_nonnegative(r: f64, x: f64, tau: f64) -> Result<f64, ExactError> {
    if r >= 0.0 {
        Ok(r)
    } else if r.is_finite() {
        Err(ExactError::InvalidParameter(
            "simple-wave modulus must be non-negative",
        ))
    } else {
        Err(ExactError::NoConvergence { x, tau })
    }
}

/// Plane-polarized simple wave of `ρ_X − β(ρ³)_τ = 0`: the root of
/// `ρ = Φ(τ + 3βXρ²)` on the branch continuous in `X` from `ρ = Φ(τ)`.
///
/// With `rho_guess` a single Newton solve is started there; without it the
/// root is continued from `X = 0`. Queries past the breaking point fail
/// with [`ExactError::NoConvergence`].
pub fn eval_simple_wave(
    beta: f64,
    phi: &ProfileFunction,
    x: f64,
    tau: f64,
    rho_guess: Option<f64>,
) -> Result<f64, ExactError> {
    let r0 = phi.value(tau);
    if x == 0.0 || beta == 0.0 || phi.is_constant() {
        return check_nonnegative(r0, x, tau);
    }
    let r = match rho_guess {
        Some(seed) => simple_wave_newton(beta, phi, x, tau, seed, NEWTON_ITER)
            .ok_or(ExactError::NoConvergence { x, tau })?,
        None => continue_branch(beta, phi, tau, 0.0, r0, x)?,
    };
    check_nonnegative(r, x, tau)
}

/// Simple-wave values at every `X` of `rows` for a fixed `τ`, continuing
/// the branch from one row to the next.
pub fn simple_wave_column(
    beta: f64,
    phi: &ProfileFunction,
    tau: f64,
    rows: Axis,
) -> Result<Vec<f64>, ExactError> {
    let mut out = Vec::with_capacity(rows.len);
    let (mut x, mut r) = (0.0, phi.value(tau));
    for i in 0..rows.len {
        let xi = rows.coord(i);
        r = if beta == 0.0 {
            r
        } else {
            continue_branch(beta, phi, tau, x, r, xi)?
        };
        x = xi;
        out.push(check_nonnegative(r, x, tau)?);
    }
    Ok(out)
}

/// The simple wave sampled on a tensor grid, as a single field `"rho"`.
pub fn simple_wave_field(
    beta: f64,
    phi: &ProfileFunction,
    rows: Axis,
    cols: Axis,
) -> Result<SampledField, ExactError> {
    SampledField::from_columns(rows, cols, ["rho"], |tau| {
        Ok([simple_wave_column(beta, phi, tau, rows)?])
    })
}

/// Potential `φ` with `φ_τ = ρ`, `φ_X = βρ³`, normalized to `φ = 0` at the
/// first grid node.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    /// Fields `"rho"` and `"phi"`.
    pub field: SampledField,
    /// Largest disagreement between the two quadrature paths.
    pub discrepancy: f64,
    /// Allowance derived from trapezoid error bounds on the data.
    pub allowed: f64,
}

/// Integrates the potential of a sampled `ρ` (rows `X`, columns `τ`).
///
/// `φ` is accumulated along `X` on the first column and then along `τ` on
/// every row; the reverse path is computed too, and the two must agree up
/// to ten times the composite trapezoid error bound estimated from second
/// differences of the data.
pub fn potential_phi(rho_field: &SampledField, beta: f64) -> Result<Potential, ExactError> {
    let rho = rho_field
        .field("rho")
        .ok_or(ExactError::MissingField("rho"))?;
    let (rows, cols) = (rho_field.rows(), rho_field.cols());
    let (nr, nc) = (rows.len, cols.len);
    let (hx, ht) = (rows.step, cols.step);
    let idx = |r: usize, c: usize| r * nc + c;
    let flux: Vec<f64> = rho.iter().map(|p| beta * p * p * p).collect();

    let mut a = vec![0.0; nr * nc];
    for r in 1..nr {
        a[idx(r, 0)] = a[idx(r - 1, 0)] + 0.5 * hx * (flux[idx(r - 1, 0)] + flux[idx(r, 0)]);
    }
    for r in 0..nr {
        for c in 1..nc {
            a[idx(r, c)] = a[idx(r, c - 1)] + 0.5 * ht * (rho[idx(r, c - 1)] + rho[idx(r, c)]);
        }
    }

    let mut b = vec![0.0; nr * nc];
    for c in 1..nc {
        b[idx(0, c)] = b[idx(0, c - 1)] + 0.5 * ht * (rho[idx(0, c - 1)] + rho[idx(0, c)]);
    }
    for r in 1..nr {
        for c in 0..nc {
            b[idx(r, c)] = b[idx(r - 1, c)] + 0.5 * hx * (flux[idx(r - 1, c)] + flux[idx(r, c)]);
        }
    }

    let discrepancy = a
        .iter()
        .zip(&b)
        .map(|(p, q)| math::abs(p - q))
        .fold(0.0, f64::max);

    let mut m_tau: f64 = 0.0;
    let mut m_x: f64 = 0.0;
    for r in 0..nr {
        for c in 1..nc - 1 {
            let d2 = rho[idx(r, c - 1)] - 2.0 * rho[idx(r, c)] + rho[idx(r, c + 1)];
            m_tau = m_tau.max(math::abs(d2) / (ht * ht));
        }
    }
    for c in 0..nc {
        for r in 1..nr - 1 {
            let d2 = flux[idx(r - 1, c)] - 2.0 * flux[idx(r, c)] + flux[idx(r + 1, c)];
            m_x = m_x.max(math::abs(d2) / (hx * hx));
        }
    }
    let len_x = hx * (nr - 1) as f64;
    let len_t = ht * (nc - 1) as f64;
    let scale = a.iter().fold(1.0f64, |m, v| m.max(math::abs(*v)));
    let allowed = 10.0 * (len_t * ht * ht * m_tau + len_x * hx * hx * m_x) / 12.0 + 1e-12 * scale;
    if !(discrepancy <= allowed) {
        return Err(ExactError::InconsistentField {
            discrepancy,
            allowed,
        });
    }
    let field = rho_field.clone().with_field("phi", a);
    Ok(Potential {
        field,
        discrepancy,
        allowed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sine(amp: f64) -> ProfileFunction {
        ProfileFunction::Sine {
            amp,
            freq: 1.0,
            offset: 1.0,
        }
    }

    #[test]
    fn asymptotic_linear_examples() {
        let th = ProfileFunction::Linear { k: 1.0 };
        let s = eval_asymptotic_linear(1.0, 1.0, &th, 0.0, 0.0);
        assert_eq!((s.u, s.v), (1.0, 0.0));
        let s = eval_asymptotic_linear(0.5, 2.0, &th, 1.0, 1.0);
        assert!((s.u - 2.0 * 3f64.cos()).abs() < 1e-15);
        assert!((s.v - 2.0 * 3f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn simple_wave_trivial_cases() {
        let phi = sine(0.1);
        assert_eq!(
            eval_simple_wave(1.0, &phi, 0.0, 0.7, None).unwrap(),
            phi.value(0.7)
        );
        let c = ProfileFunction::Const(0.4);
        assert_eq!(eval_simple_wave(2.0, &c, 3.0, -1.0, None).unwrap(), 0.4);
    }

    #[test]
    fn simple_wave_satisfies_implicit_relation() {
        let phi = sine(0.1);
        for i in 0..40 {
            let tau = -3.0 + 0.17 * i as f64;
            let x = 0.02 * i as f64;
            let r = eval_simple_wave(1.0, &phi, x, tau, None).unwrap();
            let res = r - phi.value(tau + 3.0 * x * r * r);
            assert!(res.abs() <= 1e-12, "residual {res}");
        }
    }

    #[test]
    fn guess_and_continuation_agree() {
        let phi = sine(0.2);
        let a = eval_simple_wave(0.8, &phi, 0.5, 1.3, None).unwrap();
        let b = eval_simple_wave(0.8, &phi, 0.5, 1.3, Some(a + 0.01)).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn post_shock_query_fails() {
        // X* = 1/max(6βρΦ′) ≈ 1/(6·1.2·0.2) for this profile, so X = 5 is
        // far past breaking for the columns near the steepest compression.
        let phi = sine(0.2);
        let fails = (0..64)
            .map(|i| i as f64 * core::f64::consts::TAU / 64.0)
            .filter(|&tau| eval_simple_wave(1.0, &phi, 5.0, tau, None).is_err())
            .count();
        assert!(fails > 0);
    }

    #[test]
    fn column_matches_pointwise() {
        let phi = sine(0.1);
        let rows = Axis::spanning(0.0, 0.6, 13).unwrap();
        let col = simple_wave_column(1.0, &phi, 0.4, rows).unwrap();
        for (i, r) in col.iter().enumerate() {
            let p = eval_simple_wave(1.0, &phi, rows.coord(i), 0.4, None).unwrap();
            assert!((r - p).abs() < 1e-13);
        }
    }

    #[test]
    fn constant_potential_is_affine() {
        let (c, beta) = (0.7, 1.3);
        let rows = Axis::spanning(0.0, 1.0, 11).unwrap();
        let cols = Axis::spanning(-1.0, 2.0, 31).unwrap();
        let f = SampledField::from_fn(rows, cols, ["rho"], |_, _| [c]);
        let p = potential_phi(&f, beta).unwrap();
        let phi = p.field.field("phi").unwrap();
        for r in 0..rows.len {
            for k in 0..cols.len {
                let expected = c * (cols.coord(k) - cols.start) + beta * c * c * c * rows.coord(r);
                assert!((phi[p.field.index(r, k)] - expected).abs() < 1e-13);
            }
        }
        assert!(p.discrepancy < 1e-13);
    }

    #[test]
    fn inconsistent_field_rejected() {
        let rows = Axis::spanning(0.0, 1.0, 21).unwrap();
        let cols = Axis::spanning(0.0, 1.0, 21).unwrap();
        let f = SampledField::from_fn(rows, cols, ["rho"], |x, _| [1.0 + x]);
        assert!(matches!(
            potential_phi(&f, 1.0),
            Err(ExactError::InconsistentField { .. })
        ));
    }
}
