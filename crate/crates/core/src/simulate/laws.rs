use super::kernel::ConservationLaw;
use super::SimulateError;
use crate::constitutive::ShearModulus;
use crate::function::{Bivariate, BivariateFn};
use crate::math;

/// `U_t = M_x, M_t = [Q̃U]_x, V_t = N_x, N_t = [Q̃V]_x` with state
/// `[U, M, V, N]`.
pub(crate) struct FullShear<'a> {
    pub modulus: &'a ShearModulus,
}

impl FullShear<'_> {
    /// Squared characteristic speeds `(slow², fast²)`.
    pub(crate) fn speeds_sq(&self, u: f64, v: f64) -> Result<(f64, f64), SimulateError> {
        let s = u * u + v * v;
        let q = self.modulus.law().value(s) / self.modulus.rho();
        let dq = self.modulus.dq(s) / self.modulus.rho();
        let slow = q;
        let fast = q + 2.0 * dq * s;
        if !(slow > 0.0 && fast > 0.0) {
            return Err(SimulateError::HyperbolicityLoss {
                coord: f64::NAN,
                lambda_sq: slow.min(fast),
            });
        }
        Ok((slow, fast))
    }
}

impl ConservationLaw<4> for FullShear<'_> {
    fn flux(&self, q: &[f64; 4]) -> [f64; 4] {
        let s = q[0] * q[0] + q[2] * q[2];
        let qt = self.modulus.law().value(s) / self.modulus.rho();
        [-q[1], -qt * q[0], -q[3], -qt * q[2]]
    }

    fn max_speed(&self, q: &[f64; 4]) -> Result<f64, SimulateError> {
        let (slow, fast) = self.speeds_sq(q[0], q[2])?;
        Ok(math::sqrt(slow.max(fast)))
    }
}

/// `U_X = β[(U²+V²)U]_τ, V_X = β[(U²+V²)V]_τ` with state `[U, V]`.
pub(crate) struct Asymptotic {
    pub beta: f64,
}

impl ConservationLaw<2> for Asymptotic {
    fn flux(&self, q: &[f64; 2]) -> [f64; 2] {
        let s = q[0] * q[0] + q[1] * q[1];
        [-self.beta * s * q[0], -self.beta * s * q[1]]
    }

    fn max_speed(&self, q: &[f64; 2]) -> Result<f64, SimulateError> {
        Ok(3.0 * math::abs(self.beta) * (q[0] * q[0] + q[1] * q[1]))
    }
}

/// `ρ_X = β(ρ³)_τ`.
pub(crate) struct ScalarCubic {
    pub beta: f64,
}

impl ConservationLaw<1> for ScalarCubic {
    fn flux(&self, q: &[f64; 1]) -> [f64; 1] {
        [-self.beta * q[0] * q[0] * q[0]]
    }

    fn max_speed(&self, q: &[f64; 1]) -> Result<f64, SimulateError> {
        Ok(3.0 * math::abs(self.beta) * q[0] * q[0])
    }
}

/// `u_t = [P u]_x, v_t = [P v]_x`.
pub(crate) struct Temple<'a> {
    pub p: &'a BivariateFn,
}

impl ConservationLaw<2> for Temple<'_> {
    fn flux(&self, q: &[f64; 2]) -> [f64; 2] {
        let p = self.p.value(q[0], q[1]);
        [-p * q[0], -p * q[1]]
    }

    fn max_speed(&self, q: &[f64; 2]) -> Result<f64, SimulateError> {
        let p = self.p.value(q[0], q[1]);
        let [pu, pv] = self.p.gradient(q[0], q[1]);
        let l1 = p + q[0] * pu + q[1] * pv;
        if !(p.is_finite() && l1.is_finite()) {
            return Err(SimulateError::HyperbolicityLoss {
                coord: f64::NAN,
                lambda_sq: f64::NAN,
            });
        }
        Ok(math::abs(p).max(math::abs(l1)))
    }
}
