//! Root finders shared by the constitutive and exact-solution modules.

use crate::math;

pub(crate) const MAX_ITER: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum RootFailure {
    NoBracket,
    NoConvergence { iterations: usize },
}

/// Bisection-safeguarded Newton iteration for `g(x) = 0` on `[lo, hi]`.
///
/// `g` returns the residual and its derivative. Converged when
/// `|g(x)| <= tol`.
pub(crate) fn bracketed_newton(
    mut g: impl FnMut(f64) -> (f64, f64),
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64, RootFailure> {
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let (ga, _) = g(a);
    let (gb, _) = g(b);
    if !ga.is_finite() || !gb.is_finite() {
        return Err(RootFailure::NoBracket);
    }
    if math::abs(ga) <= tol {
        return Ok(a);
    }
    if math::abs(gb) <= tol {
        return Ok(b);
    }
    if ga.signum() == gb.signum() {
        return Err(RootFailure::NoBracket);
    }
    // orient so that g(a) < 0 < g(b)
    let flip = ga > 0.0;
    let mut x = 0.5 * (a + b);
    for _ in 0..MAX_ITER {
        let (gx, dgx) = g(x);
        if math::abs(gx) <= tol {
            return Ok(x);
        }
        let negative = (gx < 0.0) != flip;
        if negative {
            a = x;
        } else {
            b = x;
        }
        let newton = x - gx / dgx;
        let width = b - a;
        x = if dgx != 0.0 && newton.is_finite() && newton > a && newton < b {
            newton
        } else {
            a + 0.5 * width
        };
        if width <= 4.0 * f64::EPSILON * math::abs(x) {
            let (gx, _) = g(x);
            if math::abs(gx) <= tol {
                return Ok(x);
            }
            break;
        }
    }
    Err(RootFailure::NoConvergence {
        iterations: MAX_ITER,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Newton2Failure {
    Singular { at: [f64; 2] },
    NoConvergence { iterations: usize, at: [f64; 2] },
}

/// Damped Newton iteration for `F(z) = 0` in two unknowns.
///
/// The step is halved up to 20 times when the residual norm does not
/// decrease. `residual` returns `F(z)` and its Jacobian `∂F/∂z`.
pub(crate) fn damped_newton_2d(
    mut residual: impl FnMut([f64; 2]) -> Option<([f64; 2], [[f64; 2]; 2])>,
    seed: [f64; 2],
    tol: f64,
    singular_tol: f64,
) -> Result<[f64; 2], Newton2Failure> {
    let mut z = seed;
    let Some((mut f, mut jac)) = residual(z) else {
        return Err(Newton2Failure::NoConvergence {
            iterations: 0,
            at: z,
        });
    };
    for it in 0..MAX_ITER {
        if math::abs(f[0]) <= tol && math::abs(f[1]) <= tol {
            return Ok(z);
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        let scale = (math::abs(jac[0][0]) + math::abs(jac[0][1]))
            * (math::abs(jac[1][0]) + math::abs(jac[1][1]));
        if !det.is_finite() || math::abs(det) <= singular_tol * scale.max(f64::MIN_POSITIVE) {
            return Err(Newton2Failure::Singular { at: z });
        }
        let dz = [
            (jac[1][1] * f[0] - jac[0][1] * f[1]) / det,
            (-jac[1][0] * f[0] + jac[0][0] * f[1]) / det,
        ];
        let norm0 = math::hypot(f[0], f[1]);
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..=20 {
            let trial = [z[0] - lambda * dz[0], z[1] - lambda * dz[1]];
            if let Some((ft, jt)) = residual(trial) {
                if ft[0].is_finite() && ft[1].is_finite() && math::hypot(ft[0], ft[1]) < norm0 {
                    accepted = Some((trial, ft, jt));
                    break;
                }
            }
            lambda *= 0.5;
        }
        match accepted {
            Some((zn, fnew, jnew)) => {
                z = zn;
                f = fnew;
                jac = jnew;
            }
            None => {
                return Err(Newton2Failure::NoConvergence {
                    iterations: it + 1,
                    at: z,
                });
            }
        }
    }
    if math::abs(f[0]) <= tol && math::abs(f[1]) <= tol {
        Ok(z)
    } else {
        Err(Newton2Failure::NoConvergence {
            iterations: MAX_ITER,
            at: z,
        })
    }
}
