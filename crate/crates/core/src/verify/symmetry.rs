use alloc::sync::Arc;
use alloc::vec;
use core::fmt;

use super::residual::{interior, study, Accumulator, Stencil, DEFAULT_TARGET};
use super::{ResidualReport, VerifyError};
use crate::function::ProfileFunction;
use crate::math;
use crate::state::SampledField;

/// Second-order jet in `τ` of a polar field at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet {
    pub theta: f64,
    pub rho: f64,
    pub theta_t: f64,
    pub rho_t: f64,
    pub theta_tt: f64,
    pub rho_tt: f64,
}

impl Jet {
    fn coords(&self) -> [f64; 4] {
        [self.theta, self.rho, self.theta_t, self.rho_t]
    }

    fn with(&self, k: usize, value: f64) -> Self {
        let mut j = *self;
        match k {
            0 => j.theta = value,
            1 => j.rho = value,
            2 => j.theta_t = value,
            _ => j.rho_t = value,
        }
        j
    }

    /// Formal total `τ`-derivative of a function with the given partials
    /// in `(θ, ρ, θ_τ, ρ_τ)`.
    fn total(&self, p: &[f64; 4]) -> f64 {
        p[0] * self.theta_t + p[1] * self.rho_t + p[2] * self.theta_tt + p[3] * self.rho_tt
    }
}

/// Characteristic `(φ^θ, φ^ρ)` of a generalized vector field depending on
/// `(θ, ρ, θ_τ, ρ_τ)`.
pub trait Characteristic {
    fn components(&self, j: &Jet) -> [f64; 2];

    /// `∂φ^k/∂(θ, ρ, θ_τ, ρ_τ)`; central differences unless overridden.
    fn partials(&self, j: &Jet) -> [[f64; 4]; 2] {
        let mut out = [[0.0; 4]; 2];
        for (k, x) in j.coords().iter().enumerate() {
            let h = 1e-6 * x.abs().max(1.0);
            let p = self.components(&j.with(k, x + h));
            let m = self.components(&j.with(k, x - h));
            out[0][k] = (p[0] - m[0]) / (2.0 * h);
            out[1][k] = (p[1] - m[1]) / (2.0 * h);
        }
        out
    }
}

/// `φ^θ = −(s3(θ)/ρ + s4(ρ))θ_τ`, `φ^ρ = −(ρs4′(ρ) + s4(ρ))ρ_τ`.
#[derive(Debug, Clone)]
pub struct HydrodynamicSymmetry {
    pub s3: ProfileFunction,
    pub s4: ProfileFunction,
}

impl HydrodynamicSymmetry {
    pub fn new(s3: ProfileFunction, s4: ProfileFunction) -> Self {
        Self { s3, s4 }
    }
}

impl Characteristic for HydrodynamicSymmetry {
    fn components(&self, j: &Jet) -> [f64; 2] {
        let a = self.s3.value(j.theta) / j.rho + self.s4.value(j.rho);
        let b = self.s4.d1(j.rho) * j.rho + self.s4.value(j.rho);
        [-a * j.theta_t, -b * j.rho_t]
    }

    fn partials(&self, j: &Jet) -> [[f64; 4]; 2] {
        let (s3, ds3) = (self.s3.value(j.theta), self.s3.d1(j.theta));
        let (s4, ds4, d2s4) = (self.s4.value(j.rho), self.s4.d1(j.rho), self.s4.d2(j.rho));
        let r = j.rho;
        [
            [
                -ds3 / r * j.theta_t,
                (s3 / (r * r) - ds4) * j.theta_t,
                -(s3 / r + s4),
                0.0,
            ],
            [0.0, -(d2s4 * r + 2.0 * ds4) * j.rho_t, 0.0, -(ds4 * r + s4)],
        ]
    }
}

/// `φ^θ = θ_τ²`, `φ^ρ = 0`: not a symmetry wherever `ρ_τ ≠ 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct TauSquared;

impl Characteristic for TauSquared {
    fn components(&self, j: &Jet) -> [f64; 2] {
        [j.theta_t * j.theta_t, 0.0]
    }

    fn partials(&self, j: &Jet) -> [[f64; 4]; 2] {
        [[0.0, 0.0, 2.0 * j.theta_t, 0.0], [0.0; 4]]
    }
}

/// Adds `ε ρ_τ²` to `φ^ρ` of another characteristic.
#[derive(Debug, Clone)]
pub struct Perturbed<C> {
    pub base: C,
    pub eps: f64,
}

impl<C: Characteristic> Characteristic for Perturbed<C> {
    fn components(&self, j: &Jet) -> [f64; 2] {
        let [a, b] = self.base.components(j);
        [a, b + self.eps * j.rho_t * j.rho_t]
    }

    fn partials(&self, j: &Jet) -> [[f64; 4]; 2] {
        let mut p = self.base.partials(j);
        p[1][3] += 2.0 * self.eps * j.rho_t;
        p
    }
}

type FirstOrderFn = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

/// `φ = −s1(θ, ρ, θ_τ) ∂_θ + s2(ρ) ρ_τ ∂_ρ`, subject to
/// `ρ ∂s1/∂ρ + θ_τ ∂s1/∂θ_τ + s2 θ_τ = 0`.
#[derive(Clone)]
pub struct FirstOrderSymmetry {
    s1: FirstOrderFn,
    s2: ProfileFunction,
}

impl fmt::Debug for FirstOrderSymmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FirstOrderSymmetry")
            .field("s2", &self.s2)
            .finish_non_exhaustive()
    }
}

impl FirstOrderSymmetry {
    /// Builds the symmetry after checking the constraint to 1e-8 on
    /// `(θ, ρ, θ_τ)` samples.
    pub fn new(
        s1: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
        s2: ProfileFunction,
        samples: &[(f64, f64, f64)],
    ) -> Result<Self, VerifyError> {
        let sym = Self {
            s1: Arc::new(s1),
            s2,
        };
        let r = sym.constraint_residual(samples);
        if !(r <= 1e-8) {
            return Err(VerifyError::ConstraintViolated(r));
        }
        Ok(sym)
    }

    /// The hydrodynamic member `s1 = (s3/ρ + s4)θ_τ`, `s2 = −(ρs4′ + s4)`.
    pub fn hydrodynamic(s3: ProfileFunction, s4: ProfileFunction) -> Self {
        let s4c = s4.clone();
        let s2 = ProfileFunction::custom_with_derivative(
            {
                let s4 = s4.clone();
                move |r| -(s4.d1(r) * r + s4.value(r))
            },
            move |r| -(s4c.d2(r) * r + 2.0 * s4c.d1(r)),
        );
        let s1 = move |th: f64, r: f64, tt: f64| (s3.value(th) / r + s4.value(r)) * tt;
        Self {
            s1: Arc::new(s1),
            s2,
        }
    }

    /// Largest constraint residual over `(θ, ρ, θ_τ)` samples.
    pub fn constraint_residual(&self, samples: &[(f64, f64, f64)]) -> f64 {
        samples
            .iter()
            .map(|&(th, r, tt)| {
                let hr = 1e-6 * r.abs().max(1.0);
                let ht = 1e-6 * tt.abs().max(1.0);
                let d_r = ((self.s1)(th, r + hr, tt) - (self.s1)(th, r - hr, tt)) / (2.0 * hr);
                let d_t = ((self.s1)(th, r, tt + ht) - (self.s1)(th, r, tt - ht)) / (2.0 * ht);
                math::abs(r * d_r + tt * d_t + self.s2.value(r) * tt)
            })
            .fold(0.0, f64::max)
    }
}

impl Characteristic for FirstOrderSymmetry {
    fn components(&self, j: &Jet) -> [f64; 2] {
        [
            -(self.s1)(j.theta, j.rho, j.theta_t),
            self.s2.value(j.rho) * j.rho_t,
        ]
    }
}

/// Residual of the linearized system
/// `D_X φ^θ − 2βρθ_τφ^ρ − βρ² D_τ φ^θ = 0`,
/// `D_X φ^ρ − 6βρρ_τφ^ρ − 3βρ² D_τ φ^ρ = 0`
/// for a characteristic evaluated on fields `"theta"`, `"rho"` over
/// `(X, τ)`.
pub fn linearized_symmetry_residual<C: Characteristic>(
    levels: &[SampledField],
    beta: f64,
    spec: &C,
) -> Result<ResidualReport, VerifyError> {
    study(levels, DEFAULT_TARGET, |f| {
        let th = Stencil::new(f, "theta")?;
        let rh = Stencil::new(f, "rho")?;
        let (nr, nc) = (f.rows().len, f.cols().len);
        let mut pt = vec![0.0; nr * nc];
        let mut pr = vec![0.0; nr * nc];
        for r in 1..nr - 1 {
            for c in 1..nc - 1 {
                let j = Jet {
                    theta: th.at(r, c),
                    rho: rh.at(r, c),
                    theta_t: th.d_col(r, c),
                    rho_t: rh.d_col(r, c),
                    theta_tt: th.dd_col(r, c),
                    rho_tt: rh.dd_col(r, c),
                };
                let [a, b] = spec.components(&j);
                pt[r * nc + c] = a;
                pr[r * nc + c] = b;
            }
        }
        let st = Stencil::from_slice(&pt, f);
        let sr = Stencil::from_slice(&pr, f);
        let mut acc = Accumulator::default();
        for r in interior(nr) {
            for c in interior(nc) {
                let p = rh.at(r, c);
                let (tt, rt) = (th.d_col(r, c), rh.d_col(r, c));
                let phr = sr.at(r, c);
                let a = st.d_row(r, c);
                let b = 2.0 * beta * p * tt * phr;
                let d = beta * p * p * st.d_col(r, c);
                acc.push(a - b - d, &[a, b, d]);
                let a = sr.d_row(r, c);
                let b = 6.0 * beta * p * rt * phr;
                let d = 3.0 * beta * p * p * sr.d_col(r, c);
                acc.push(a - b - d, &[a, b, d]);
            }
        }
        Ok(acc.finish(f.cols().step))
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorReport {
    /// Largest absolute bracket component.
    pub max_abs: f64,
    /// Largest absolute individual term entering the bracket.
    pub scale: f64,
}

impl CommutatorReport {
    pub fn relative(&self) -> f64 {
        self.max_abs / self.scale.max(f64::MIN_POSITIVE)
    }
}

/// Jacobi bracket of `spec` with the flow `ψ = βρ²θ_τ ∂_θ + 3βρ²ρ_τ ∂_ρ`,
/// evaluated algebraically on jet samples.
pub fn commutator_residual<C: Characteristic>(
    spec: &C,
    beta: f64,
    jets: &[Jet],
) -> CommutatorReport {
    let mut max_abs: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for j in jets {
        let r = j.rho;
        let psi = [beta * r * r * j.theta_t, 3.0 * beta * r * r * j.rho_t];
        let dpsi = [
            [0.0, 2.0 * beta * r * j.theta_t, beta * r * r, 0.0],
            [0.0, 6.0 * beta * r * j.rho_t, 0.0, 3.0 * beta * r * r],
        ];
        let phi = spec.components(j);
        let dphi = spec.partials(j);
        let d_phi = [j.total(&dphi[0]), j.total(&dphi[1])];
        let d_psi = [j.total(&dpsi[0]), j.total(&dpsi[1])];
        for k in 0..2 {
            let terms = [
                phi[0] * dpsi[k][0],
                phi[1] * dpsi[k][1],
                d_phi[0] * dpsi[k][2],
                d_phi[1] * dpsi[k][3],
                -psi[0] * dphi[k][0],
                -psi[1] * dphi[k][1],
                -d_psi[0] * dphi[k][2],
                -d_psi[1] * dphi[k][3],
            ];
            let sum: f64 = terms.iter().sum();
            max_abs = max_abs.max(math::abs(sum));
            for t in terms {
                scale = scale.max(math::abs(t));
            }
        }
    }
    CommutatorReport { max_abs, scale }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_jets(n: usize, seed: u64) -> Vec<Jet> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| Jet {
                theta: rng.gen_range(-3.0..3.0),
                rho: rng.gen_range(0.2..2.0),
                theta_t: rng.gen_range(-2.0..2.0),
                rho_t: rng.gen_range(-2.0..2.0),
                theta_tt: rng.gen_range(-2.0..2.0),
                rho_tt: rng.gen_range(-2.0..2.0),
            })
            .collect()
    }

    fn sym() -> HydrodynamicSymmetry {
        HydrodynamicSymmetry::new(
            ProfileFunction::Sine {
                amp: 0.7,
                freq: 1.3,
                offset: 0.2,
            },
            ProfileFunction::Poly(vec![0.3, -0.5, 0.2, 0.1]),
        )
    }

    #[test]
    fn hydrodynamic_symmetries_commute() {
        let r = commutator_residual(&sym(), 1.7, &random_jets(100, 7));
        assert!(r.max_abs <= 1e-10 * r.scale.max(1.0), "{r:?}");
        let trivial =
            HydrodynamicSymmetry::new(ProfileFunction::Const(0.0), ProfileFunction::Const(2.0));
        assert_eq!(
            commutator_residual(&trivial, 0.9, &random_jets(20, 3)).max_abs,
            0.0
        );
    }

    #[test]
    fn perturbed_symmetry_does_not_commute() {
        let p = Perturbed {
            base: sym(),
            eps: 0.1,
        };
        let r = commutator_residual(&p, 1.0, &random_jets(20, 11));
        assert!(r.relative() > 1e-3);
    }

    #[test]
    fn analytic_partials_match_differences() {
        let s = sym();
        for j in random_jets(10, 5) {
            let a = s.partials(&j);
            let b = FirstOrderSymmetry::hydrodynamic(s.s3.clone(), s.s4.clone()).partials(&j);
            for k in 0..2 {
                for i in 0..4 {
                    assert!((a[k][i] - b[k][i]).abs() < 1e-6 * a[k][i].abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn first_order_constraint() {
        let samples = [(0.1, 0.5, 1.0), (1.0, 2.0, -0.3), (-2.0, 1.1, 0.7)];
        let h = FirstOrderSymmetry::hydrodynamic(
            ProfileFunction::Linear { k: 1.0 },
            ProfileFunction::Poly(vec![0.0, 1.0, 1.0]),
        );
        assert!(h.constraint_residual(&samples) < 1e-8);
        // A function of (θ, θ_τ/ρ) with s2 = 0 also satisfies the constraint.
        assert!(FirstOrderSymmetry::new(
            |th: f64, r: f64, tt: f64| th.sin() * (tt / r) * (tt / r),
            ProfileFunction::Const(0.0),
            &samples
        )
        .is_ok());
        assert!(matches!(
            FirstOrderSymmetry::new(|_, r: f64, _| r, ProfileFunction::Const(0.0), &samples),
            Err(VerifyError::ConstraintViolated(_))
        ));
    }
}
