use crate::constitutive::ShearModulus;
use crate::function::ProfileFunction;
use crate::math;
use crate::state::{FullState, StrainState};

use super::ExactError;

/// Sign choice shared by the polarization of `V` and the propagation
/// direction of a level-set solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn from_f64(x: f64) -> Option<Self> {
        if x == 1.0 {
            Some(Sign::Plus)
        } else if x == -1.0 {
            Some(Sign::Minus)
        } else {
            None
        }
    }
}

/// `ω = k·√(Q(A²)/ϱ)`.
pub fn carroll_dispersion(m: &ShearModulus, amplitude: f64, k: f64) -> Result<f64, ExactError> {
    if !(amplitude > 0.0 && k > 0.0) {
        return Err(ExactError::InvalidParameter(
            "amplitude and wavenumber must be positive",
        ));
    }
    Ok(k * math::sqrt(m.q_tilde(amplitude * amplitude)?))
}

/// Finite-amplitude circularly polarized harmonic progressive wave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarrollWave {
    amplitude: f64,
    k: f64,
    omega: f64,
    polarization: Sign,
}

impl CarrollWave {
    /// Builds the wave with `ω` taken from the dispersion relation.
    pub fn new(
        m: &ShearModulus,
        amplitude: f64,
        k: f64,
        polarization: Sign,
    ) -> Result<Self, ExactError> {
        let omega = carroll_dispersion(m, amplitude, k)?;
        Ok(Self {
            amplitude,
            k,
            omega,
            polarization,
        })
    }

    /// Builds the wave from an explicit `ω`, checking `ϱω² = k²Q(A²)` to
    /// 1e-12 relative.
    pub fn with_frequency(
        m: &ShearModulus,
        amplitude: f64,
        k: f64,
        omega: f64,
        polarization: Sign,
    ) -> Result<Self, ExactError> {
        let expected = carroll_dispersion(m, amplitude, k)?;
        let lhs = m.rho() * omega * omega;
        let rhs = m.rho() * expected * expected;
        if !(omega > 0.0) || math::abs(lhs - rhs) > 1e-12 * rhs {
            return Err(ExactError::DispersionMismatch { omega, expected });
        }
        Ok(Self {
            amplitude,
            k,
            omega,
            polarization,
        })
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn wavenumber(&self) -> f64 {
        self.k
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn polarization(&self) -> Sign {
        self.polarization
    }

    pub fn period(&self) -> f64 {
        2.0 * core::f64::consts::PI / self.omega
    }

    /// Phase speed `ω/k`.
    pub fn speed(&self) -> f64 {
        self.omega / self.k
    }

    pub fn eval(&self, x: f64, t: f64) -> StrainState {
        let phase = self.k * x - self.omega * t;
        StrainState {
            u: self.amplitude * math::cos(phase),
            v: self.polarization.value() * self.amplitude * math::sin(phase),
        }
    }

    /// Strains plus the velocities `M = u_t`, `N = v_t` (up to the
    /// constant of integration, fixed to zero mean).
    pub fn eval_full(&self, x: f64, t: f64) -> FullState {
        let s = self.eval(x, t);
        let c = self.speed();
        FullState {
            u: s.u,
            m: -c * s.u,
            v: s.v,
            n: -c * s.v,
        }
    }
}

/// Constant-amplitude wave `θ = F(x ± c t)`, `c = √(Q(A²)/ϱ)`, with `V`
/// carrying an independent polarization sign.
#[derive(Debug, Clone)]
pub struct GeneralizedCarroll {
    amplitude: f64,
    profile: ProfileFunction,
    direction: Sign,
    polarization: Sign,
    speed: f64,
}

impl GeneralizedCarroll {
    pub fn new(
        m: &ShearModulus,
        amplitude: f64,
        profile: ProfileFunction,
        direction: Sign,
        polarization: Sign,
    ) -> Result<Self, ExactError> {
        if !(amplitude >= 0.0) {
            return Err(ExactError::InvalidParameter(
                "amplitude must be non-negative",
            ));
        }
        let speed = math::sqrt(m.q_tilde(amplitude * amplitude)?);
        Ok(Self {
            amplitude,
            profile,
            direction,
            polarization,
            speed,
        })
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    pub fn eval(&self, x: f64, t: f64) -> StrainState {
        let theta = self
            .profile
            .value(x + self.direction.value() * self.speed * t);
        StrainState {
            u: self.amplitude * math::cos(theta),
            v: self.polarization.value() * self.amplitude * math::sin(theta),
        }
    }

    /// `M = ±c U`, `N = ±c V` with the sign of the propagation direction.
    pub fn eval_full(&self, x: f64, t: f64) -> FullState {
        let s = self.eval(x, t);
        let c = self.direction.value() * self.speed;
        FullState {
            u: s.u,
            m: c * s.u,
            v: s.v,
            n: c * s.v,
        }
    }
}

/// One-shot form of [`GeneralizedCarroll::eval`].
pub fn eval_generalized_carroll(
    m: &ShearModulus,
    amplitude: f64,
    profile: &ProfileFunction,
    direction: Sign,
    polarization: Sign,
    x: f64,
    t: f64,
) -> Result<StrainState, ExactError> {
    Ok(GeneralizedCarroll::new(m, amplitude, profile.clone(), direction, polarization)?.eval(x, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn dispersion_examples() {
        let lin = ShearModulus::mooney_rivlin(1.0, 1.0).unwrap();
        assert!((carroll_dispersion(&lin, 0.7, 2.0).unwrap() - 2.0).abs() < 1e-15);
        let m = ShearModulus::cubic(1.0, 0.5, 1.0).unwrap();
        assert!((carroll_dispersion(&m, 1.0, 1.0).unwrap() - 1.224744871391589).abs() < 1e-12);
        let m = ShearModulus::cubic(1.0, 1.0, 4.0).unwrap();
        assert!((carroll_dispersion(&m, 2.0, 3.0).unwrap() - 3.3541019662496847).abs() < 1e-12);
    }

    #[test]
    fn eval_examples() {
        let m = ShearModulus::mooney_rivlin(1.0, 1.0).unwrap();
        let w = CarrollWave::with_frequency(&m, 1.0, 1.0, 1.0, Sign::Plus).unwrap();
        let s = w.eval(0.0, 0.0);
        assert_eq!((s.u, s.v), (1.0, 0.0));
        let s = w.eval(PI / 2.0, 0.0);
        assert!(s.u.abs() < 1e-15 && (s.v - 1.0).abs() < 1e-15);
        let w = CarrollWave::with_frequency(&m, 2.0, 1.0, 1.0, Sign::Minus).unwrap();
        let s = w.eval(0.0, PI / 2.0);
        assert!(s.u.abs() < 1e-15 && (s.v - 2.0).abs() < 1e-15);
    }

    #[test]
    fn wrong_frequency_rejected() {
        let m = ShearModulus::cubic(1.0, 0.5, 1.0).unwrap();
        assert!(matches!(
            CarrollWave::with_frequency(&m, 1.0, 1.0, 1.0, Sign::Plus),
            Err(ExactError::DispersionMismatch { .. })
        ));
    }

    #[test]
    fn linear_profile_reproduces_carroll() {
        let m = ShearModulus::cubic(1.0, 0.5, 2.0).unwrap();
        let w = CarrollWave::new(&m, 0.8, 1.7, Sign::Minus).unwrap();
        let g = GeneralizedCarroll::new(
            &m,
            0.8,
            ProfileFunction::Linear { k: 1.7 },
            Sign::Minus,
            Sign::Minus,
        )
        .unwrap();
        for i in 0..50 {
            let (x, t) = (0.37 * i as f64, 0.11 * i as f64);
            let (a, b) = (w.eval(x, t), g.eval(x, t));
            assert!((a.u - b.u).abs() < 1e-14 && (a.v - b.v).abs() < 1e-14);
            let (a, b) = (w.eval_full(x, t), g.eval_full(x, t));
            assert!((a.m - b.m).abs() < 1e-13 && (a.n - b.n).abs() < 1e-13);
        }
    }

    #[test]
    fn generalized_examples() {
        let m = ShearModulus::mooney_rivlin(1.0, 1.0).unwrap();
        let s = eval_generalized_carroll(
            &m,
            1.0,
            &ProfileFunction::Poly(alloc::vec![0.0, 0.0, 1.0]),
            Sign::Minus,
            Sign::Plus,
            1.0,
            1.0,
        )
        .unwrap();
        assert_eq!((s.u, s.v), (1.0, 0.0));
        let s = eval_generalized_carroll(
            &m,
            2.0,
            &ProfileFunction::Const(0.3),
            Sign::Plus,
            Sign::Plus,
            5.0,
            -2.0,
        )
        .unwrap();
        assert!((s.u - 2.0 * 0.3f64.cos()).abs() < 1e-15);
        assert!((s.v - 2.0 * 0.3f64.sin()).abs() < 1e-15);
    }
}
