//! Constitutive laws: the generalized shear modulus `Q(s)` of the elastic
//! system, the abstract flux function `P(u, v)` of the Temple family, and
//! the coefficient `β` of the asymptotic system.
//!
//! Positivity is checked lazily at each evaluation point.

use thiserror::Error;

use crate::function::{Bivariate, BivariateFn, ProfileFunction};
use crate::math;
use crate::newton::{bracketed_newton, RootFailure, MAX_ITER};

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ConstitutiveError {
    #[error("shear modulus Q({s}) = {value} is not positive")]
    NonPositiveModulus { s: f64, value: f64 },
    #[error("flux P({u}, {v}) = {value} is not positive")]
    NonPositiveFlux { u: f64, v: f64, value: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("P(u, ·) - a does not change sign on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },
    #[error("level-set solve did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
}

/// How the reference speed `𝔠0` is derived from `μ0` and `ϱ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpeedConvention {
    /// `𝔠0 = √(μ0/ϱ)`, a speed.
    #[default]
    Speed,
    /// `𝔠0 = μ0/ϱ`, read literally.
    Literal,
}

/// Generalized shear modulus `Q(s)`, `s = U² + V²`, together with the
/// mass density `ϱ`.
#[derive(Debug, Clone)]
pub struct ShearModulus {
    q: ProfileFunction,
    rho: f64,
}

impl ShearModulus {
    pub fn new(q: ProfileFunction, rho: f64) -> Result<Self, ConstitutiveError> {
        if !(rho.is_finite() && rho > 0.0) {
            return Err(ConstitutiveError::InvalidParameter(
                "density must be positive",
            ));
        }
        Ok(Self { q, rho })
    }

    /// Mooney–Rivlin material, `Q ≡ μ`.
    pub fn mooney_rivlin(mu: f64, rho: f64) -> Result<Self, ConstitutiveError> {
        Self::new(ProfileFunction::Const(mu), rho)
    }

    /// `Q(s) = μ0 + μ1·s`; the stress `Q·U` is cubic in the strain.
    pub fn cubic(mu0: f64, mu1: f64, rho: f64) -> Result<Self, ConstitutiveError> {
        Self::new(ProfileFunction::Poly(alloc::vec![mu0, mu1]), rho)
    }

    /// `Q(s) = μ·(1 + s)ⁿ`.
    pub fn power(mu: f64, n: f64, rho: f64) -> Result<Self, ConstitutiveError> {
        Self::new(
            ProfileFunction::Power {
                scale: mu,
                shift: 1.0,
                exponent: n,
            },
            rho,
        )
    }

    pub fn law(&self) -> &ProfileFunction {
        &self.q
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// `Q(s)`, rejecting `s < 0` and non-positive values.
    pub fn eval_q(&self, s: f64) -> Result<f64, ConstitutiveError> {
        if !(s >= 0.0) {
            return Err(ConstitutiveError::InvalidParameter(
                "Q is evaluated at s >= 0",
            ));
        }
        let value = self.q.value(s);
        if !(value > 0.0) {
            return Err(ConstitutiveError::NonPositiveModulus { s, value });
        }
        Ok(value)
    }

    /// `Q′(s)`; analytic for builtins, central difference otherwise.
    pub fn dq(&self, s: f64) -> f64 {
        self.q.d1(s)
    }

    /// `Q̃ = Q/ϱ`.
    pub fn q_tilde(&self, s: f64) -> Result<f64, ConstitutiveError> {
        Ok(self.eval_q(s)? / self.rho)
    }

    pub fn mu0(&self) -> f64 {
        self.q.value(0.0)
    }

    pub fn mu1(&self) -> f64 {
        self.q.d1(0.0)
    }

    pub fn is_linear(&self) -> bool {
        self.q.is_constant()
    }

    /// Asymptotic coefficient derived from the Taylor data of `Q`.
    pub fn asymptotic(
        &self,
        convention: SpeedConvention,
    ) -> Result<AsymptoticCoefficients, ConstitutiveError> {
        let (mu0, mu1) = (self.mu0(), self.mu1());
        let beta = beta_from_moduli(mu0, mu1, self.rho, convention)?;
        Ok(AsymptoticCoefficients {
            beta,
            derivation: Some(Derivation {
                mu0,
                mu1,
                rho: self.rho,
                convention,
            }),
        })
    }
}

/// `β = 𝔠1/(2𝔠0²)` with `𝔠1 = μ1/ϱ`.
pub fn beta_from_moduli(
    mu0: f64,
    mu1: f64,
    rho: f64,
    convention: SpeedConvention,
) -> Result<f64, ConstitutiveError> {
    if !(mu0 > 0.0 && mu0.is_finite()) {
        return Err(ConstitutiveError::InvalidParameter("mu0 must be positive"));
    }
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(ConstitutiveError::InvalidParameter(
            "density must be positive",
        ));
    }
    let c1 = mu1 / rho;
    let c0 = match convention {
        SpeedConvention::Speed => math::sqrt(mu0 / rho),
        SpeedConvention::Literal => mu0 / rho,
    };
    Ok(c1 / (2.0 * c0 * c0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivation {
    pub mu0: f64,
    pub mu1: f64,
    pub rho: f64,
    pub convention: SpeedConvention,
}

/// Coefficient `β` of the asymptotic system, optionally with the moduli it
/// was derived from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticCoefficients {
    pub beta: f64,
    pub derivation: Option<Derivation>,
}

impl AsymptoticCoefficients {
    pub fn new(beta: f64) -> Result<Self, ConstitutiveError> {
        if !beta.is_finite() {
            return Err(ConstitutiveError::InvalidParameter("beta must be finite"));
        }
        Ok(Self {
            beta,
            derivation: None,
        })
    }

    /// Rejects `β = 0`, which freezes every field.
    pub fn require_nonlinear(&self) -> Result<f64, ConstitutiveError> {
        if self.beta == 0.0 {
            return Err(ConstitutiveError::InvalidParameter("beta must be nonzero"));
        }
        Ok(self.beta)
    }
}

/// Constitutive function `P(u, v)` of the Temple family
/// `u_t = [P u]_x`, `v_t = [P v]_x`.
#[derive(Debug, Clone)]
pub struct TempleFlux {
    p: BivariateFn,
}

impl TempleFlux {
    pub fn new(p: BivariateFn) -> Self {
        Self { p }
    }

    pub fn function(&self) -> &BivariateFn {
        &self.p
    }

    pub fn eval_p(&self, u: f64, v: f64) -> Result<f64, ConstitutiveError> {
        let value = self.p.value(u, v);
        if !(value > 0.0) {
            return Err(ConstitutiveError::NonPositiveFlux { u, v, value });
        }
        Ok(value)
    }

    /// `(P_u, P_v)`.
    pub fn partials(&self, u: f64, v: f64) -> [f64; 2] {
        self.p.gradient(u, v)
    }

    pub fn hessian(&self, u: f64, v: f64) -> [[f64; 2]; 2] {
        self.p.hessian(u, v)
    }

    /// `v = Ψ(u; a)` on the level set `P(u, v) = a`, found inside
    /// `v_bracket`.
    pub fn solve_level_set(
        &self,
        a: f64,
        u: f64,
        v_bracket: (f64, f64),
    ) -> Result<f64, ConstitutiveError> {
        if !(a > 0.0) {
            return Err(ConstitutiveError::InvalidParameter(
                "level must be positive",
            ));
        }
        let tol = 1e-12 * if a > 1.0 { a } else { 1.0 };
        let (lo, hi) = v_bracket;
        bracketed_newton(
            |v| (self.p.value(u, v) - a, self.p.gradient(u, v)[1]),
            lo,
            hi,
            tol,
        )
        .map_err(|e| match e {
            RootFailure::NoBracket => ConstitutiveError::NoBracket { lo, hi },
            RootFailure::NoConvergence { .. } => ConstitutiveError::NoConvergence {
                iterations: MAX_ITER,
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_q_examples() {
        let m = ShearModulus::cubic(1.0, 0.5, 1.0).unwrap();
        assert_eq!(m.eval_q(0.0).unwrap(), 1.0);
        assert_eq!(m.eval_q(4.0).unwrap(), 3.0);
        let bad = ShearModulus::mooney_rivlin(-1.0, 1.0).unwrap();
        assert!(matches!(
            bad.eval_q(2.0),
            Err(ConstitutiveError::NonPositiveModulus { .. })
        ));
        assert!(m.eval_q(-1.0).is_err());
    }

    #[test]
    fn density_must_be_positive() {
        assert!(ShearModulus::cubic(1.0, 0.5, 0.0).is_err());
    }

    #[test]
    fn beta_examples() {
        let sp = SpeedConvention::Speed;
        assert_eq!(beta_from_moduli(1.0, 0.0, 1.0, sp).unwrap(), 0.0);
        assert!((beta_from_moduli(1.0, 1.0, 1.0, sp).unwrap() - 0.5).abs() < 1e-15);
        assert!((beta_from_moduli(2.0, 1.0, 1.0, sp).unwrap() - 0.25).abs() < 1e-15);
        // literal reading: β = μ1ϱ/(2μ0²)
        let lit = beta_from_moduli(2.0, 1.0, 3.0, SpeedConvention::Literal).unwrap();
        assert!((lit - 3.0 / 8.0).abs() < 1e-15);
        assert!(beta_from_moduli(0.0, 1.0, 1.0, sp).is_err());
    }

    #[test]
    fn moduli_from_taylor_data() {
        let m = ShearModulus::power(2.0, 1.5, 1.0).unwrap();
        assert_eq!(m.mu0(), 2.0);
        assert!((m.mu1() - 3.0).abs() < 1e-8 * 3.0);
        let c = m.asymptotic(SpeedConvention::Speed).unwrap();
        assert!((c.beta - 0.75).abs() < 1e-12);
        assert!(c.derivation.is_some());
    }

    #[test]
    fn level_set_examples() {
        let sum = TempleFlux::new(BivariateFn::SumSquares { scale: 1.0 });
        assert!((sum.solve_level_set(2.0, 1.0, (0.0, 2.0)).unwrap() - 1.0).abs() < 1e-12);
        let prod = TempleFlux::new(BivariateFn::Product);
        assert!((prod.solve_level_set(6.0, 2.0, (1.0, 5.0)).unwrap() - 3.0).abs() < 1e-12);
        assert!(matches!(
            sum.solve_level_set(0.5, 1.0, (0.0, 2.0)),
            Err(ConstitutiveError::NoBracket { .. })
        ));
    }

    #[test]
    fn nonlinear_beta_required() {
        assert!(AsymptoticCoefficients::new(0.0)
            .unwrap()
            .require_nonlinear()
            .is_err());
        assert!(AsymptoticCoefficients::new(f64::NAN).is_err());
    }
}
