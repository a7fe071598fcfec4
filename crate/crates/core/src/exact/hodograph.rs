use super::ExactError;
use crate::function::ProfileFunction;
use crate::newton::{damped_newton_2d, Newton2Failure};
use crate::state::{Axis, PolarState, SampledField};
use alloc::vec;

/// The two arbitrary functions `s3(θ)` and `s4(ρ)` of the hydrodynamic
/// symmetries; `s4′`, `s4″` come from the profile's derivative services.
#[derive(Debug, Clone)]
pub struct HodographData {
    pub s3: ProfileFunction,
    pub s4: ProfileFunction,
}

impl HodographData {
    pub fn new(s3: ProfileFunction, s4: ProfileFunction) -> Self {
        Self { s3, s4 }
    }
}

fn check(beta: f64, rho: f64) -> Result<(), ExactError> {
    if beta == 0.0 {
        return Err(ExactError::DivisionByZero("β = 0"));
    }
    if rho == 0.0 {
        return Err(ExactError::DivisionByZero("ρ = 0"));
    }
    if !(rho > 0.0) {
        return Err(ExactError::InvalidParameter("ρ must be positive"));
    }
    Ok(())
}

/// `(X, τ)` solving the algebraic system
/// `−(s3/ρ + s4) = βρ²X + τ`, `−(ρs4′ + s4) = 3βρ²X + τ`.
pub fn hodograph_forward(
    h: &HodographData,
    beta: f64,
    theta: f64,
    rho: f64,
) -> Result<(f64, f64), ExactError> {
    check(beta, rho)?;
    let s3 = h.s3.value(theta);
    let s4 = h.s4.value(rho);
    let ds4 = h.s4.d1(rho);
    let x = s3 / (2.0 * beta * rho * rho * rho) - ds4 / (2.0 * beta * rho);
    let tau = -1.5 * s3 / rho - s4 + 0.5 * rho * ds4;
    Ok((x, tau))
}

/// `∂(X, τ)/∂(θ, ρ)` of [`hodograph_forward`], rows `X` and `τ`.
pub fn hodograph_jacobian(
    h: &HodographData,
    beta: f64,
    theta: f64,
    rho: f64,
) -> Result<[[f64; 2]; 2], ExactError> {
    check(beta, rho)?;
    let s3 = h.s3.value(theta);
    let ds3 = h.s3.d1(theta);
    let ds4 = h.s4.d1(rho);
    let d2s4 = h.s4.d2(rho);
    let r2 = rho * rho;
    let x_theta = ds3 / (2.0 * beta * r2 * rho);
    let x_rho = -1.5 * s3 / (beta * r2 * r2) + ds4 / (2.0 * beta * r2) - d2s4 / (2.0 * beta * rho);
    let t_theta = -1.5 * ds3 / rho;
    let t_rho = 1.5 * s3 / r2 - 0.5 * ds4 + 0.5 * rho * d2s4;
    Ok([[x_theta, x_rho], [t_theta, t_rho]])
}

/// Solves `hodograph_forward(θ, ρ) = (X, τ)` by damped Newton from `seed`.
pub fn hodograph_invert(
    h: &HodographData,
    beta: f64,
    x: f64,
    tau: f64,
    seed: PolarState,
) -> Result<PolarState, ExactError> {
    check(beta, seed.rho)?;
    let tol = 1e-11;
    let z = damped_newton_2d(
        |z| {
            let (theta, rho) = (z[0], z[1]);
            if !(rho > 0.0) {
                return None;
            }
            let (fx, ft) = hodograph_forward(h, beta, theta, rho).ok()?;
            let jac = hodograph_jacobian(h, beta, theta, rho).ok()?;
            Some(([fx - x, ft - tau], jac))
        },
        [seed.theta, seed.rho],
        tol,
        1e-12,
    )
    .map_err(|e| match e {
        Newton2Failure::Singular { at } => ExactError::SingularJacobian {
            theta: at[0],
            rho: at[1],
        },
        Newton2Failure::NoConvergence { .. } => ExactError::NoConvergence { x, tau },
    })?;
    Ok(PolarState {
        rho: z[1],
        theta: z[0],
    })
}

/// Inverts the hodograph map on every node of a grid (rows `X`, columns
/// `τ`), returning fields `"theta"` and `"rho"`.
///
/// `seed` must be close to the solution at the first node; later nodes are
/// seeded from their neighbours. A change of sign of the Jacobian
/// determinant relative to the first node means the grid reaches across a
/// fold of the map, and is reported as [`ExactError::FoldCrossed`].
pub fn hodograph_field(
    h: &HodographData,
    beta: f64,
    rows: Axis,
    cols: Axis,
    seed: PolarState,
) -> Result<SampledField, ExactError> {
    let n = rows.len * cols.len;
    let (mut theta, mut rho) = (vec![0.0; n], vec![0.0; n]);
    let mut row_seed = seed;
    let mut orientation = 0.0;
    for i in 0..rows.len {
        let mut s = row_seed;
        for j in 0..cols.len {
            let (x, tau) = (rows.coord(i), cols.coord(j));
            let p = hodograph_invert(h, beta, x, tau, s)?;
            let [[a, b], [c, d]] = hodograph_jacobian(h, beta, p.theta, p.rho)?;
            let det = a * d - b * c;
            if orientation == 0.0 {
                orientation = det.signum();
            } else if det * orientation <= 0.0 {
                return Err(ExactError::FoldCrossed { x, tau });
            }
            if j == 0 {
                row_seed = p;
            }
            theta[i * cols.len + j] = p.theta;
            rho[i * cols.len + j] = p.rho;
            s = p;
        }
    }
    Ok(SampledField::from_fn(rows, cols, [], |_, _| [])
        .with_field("theta", theta)
        .with_field("rho", rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn data(s3: ProfileFunction, s4: ProfileFunction) -> HodographData {
        HodographData::new(s3, s4)
    }

    #[test]
    fn forward_examples() {
        let h = data(
            ProfileFunction::Const(0.0),
            ProfileFunction::Linear { k: 1.0 },
        );
        for (beta, rho) in [(1.0, 2.0), (0.5, 0.3), (-2.0, 1.7)] {
            let (x, tau) = hodograph_forward(&h, beta, 0.4, rho).unwrap();
            assert!((x + 1.0 / (2.0 * beta * rho)).abs() < 1e-15);
            assert!((tau + rho / 2.0).abs() < 1e-15);
        }
        let h = data(
            ProfileFunction::Linear { k: 1.0 },
            ProfileFunction::Const(0.0),
        );
        assert_eq!(hodograph_forward(&h, 1.3, 0.0, 0.8).unwrap(), (0.0, 0.0));
        assert!(matches!(
            hodograph_forward(&h, 1.0, 0.0, 0.0),
            Err(ExactError::DivisionByZero(_))
        ));
    }

    #[test]
    fn forward_solves_algebraic_system() {
        let h = data(
            ProfileFunction::Sine {
                amp: 0.5,
                freq: 1.0,
                offset: 0.2,
            },
            ProfileFunction::Poly(vec![0.1, -0.3, 0.0, 1.0]),
        );
        let beta = 0.7;
        for (theta, rho) in [(0.1, 0.5), (1.2, 1.4), (-0.7, 2.0)] {
            let (x, tau) = hodograph_forward(&h, beta, theta, rho).unwrap();
            let s3 = h.s3.value(theta);
            let s4 = h.s4.value(rho);
            let e1 = -(s3 / rho + s4) - (beta * rho * rho * x + tau);
            let e2 = -(h.s4.d1(rho) * rho + s4) - (3.0 * beta * rho * rho * x + tau);
            assert!(e1.abs() < 1e-13 && e2.abs() < 1e-13);
        }
    }

    #[test]
    fn jacobian_matches_differences() {
        let h = data(
            ProfileFunction::Sine {
                amp: 0.5,
                freq: 1.0,
                offset: 0.2,
            },
            ProfileFunction::Poly(vec![0.1, -0.3, 0.0, 1.0]),
        );
        let (beta, theta, rho, e) = (0.7, 0.4, 1.1, 1e-6);
        let j = hodograph_jacobian(&h, beta, theta, rho).unwrap();
        let f = |t, r| hodograph_forward(&h, beta, t, r).unwrap();
        let (a, b) = (f(theta + e, rho), f(theta - e, rho));
        assert!((j[0][0] - (a.0 - b.0) / (2.0 * e)).abs() < 1e-7);
        assert!((j[1][0] - (a.1 - b.1) / (2.0 * e)).abs() < 1e-7);
        let (a, b) = (f(theta, rho + e), f(theta, rho - e));
        assert!((j[0][1] - (a.0 - b.0) / (2.0 * e)).abs() < 1e-7);
        assert!((j[1][1] - (a.1 - b.1) / (2.0 * e)).abs() < 1e-7);
    }

    #[test]
    fn round_trip() {
        let h = data(
            ProfileFunction::Linear { k: 1.0 },
            ProfileFunction::Poly(vec![0.0, 0.0, 0.0, 1.0]),
        );
        let (theta, rho) = (0.8, 1.3);
        let (x, tau) = hodograph_forward(&h, 1.0, theta, rho).unwrap();
        let p = hodograph_invert(&h, 1.0, x, tau, PolarState::new(1.2, 0.7)).unwrap();
        assert!((p.theta - theta).abs() < 1e-10 && (p.rho - rho).abs() < 1e-10);
    }

    #[test]
    fn fold_blocks_inversion() {
        // s3 ≡ 0 and s4 = ρ³/3 − ρ give X_θ = 0: the map is singular everywhere.
        let h = data(
            ProfileFunction::Const(0.0),
            ProfileFunction::Poly(vec![0.0, -1.0, 0.0, 1.0 / 3.0]),
        );
        let r = hodograph_invert(&h, 1.0, 0.3, -0.2, PolarState::new(1.0, 0.5));
        assert!(matches!(
            r,
            Err(ExactError::SingularJacobian { .. }) | Err(ExactError::NoConvergence { .. })
        ));
    }

    #[test]
    fn field_sampling_detects_folds() {
        // With s3 = θ, s4 = ρ³ the determinant is −1.5(θ/ρ⁵ + 1/ρ)/β, which
        // vanishes on θ = −ρ⁴.
        let h = data(
            ProfileFunction::Linear { k: 1.0 },
            ProfileFunction::Poly(vec![0.0, 0.0, 0.0, 1.0]),
        );
        let ax = |c: f64, w: f64| Axis::spanning(c - w, c + w, 9).unwrap();
        let (x0, t0) = hodograph_forward(&h, 1.0, 1.0, 1.0).unwrap();
        let f =
            hodograph_field(&h, 1.0, ax(x0, 0.1), ax(t0, 0.1), PolarState::new(1.0, 1.0)).unwrap();
        assert!(f.field("rho").unwrap().iter().all(|r| *r > 0.0));
        let (x0, t0) = hodograph_forward(&h, 1.0, -1.0, 1.0).unwrap();
        let err = hodograph_field(
            &h,
            1.0,
            ax(x0, 0.5),
            ax(t0, 0.5),
            PolarState::new(1.0, -1.0),
        );
        assert!(
            matches!(
                err,
                Err(ExactError::FoldCrossed { .. }
                    | ExactError::NoConvergence { .. }
                    | ExactError::SingularJacobian { .. })
            ),
            "{err:?}"
        );
    }
}
