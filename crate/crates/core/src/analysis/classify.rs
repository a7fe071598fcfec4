use alloc::vec::Vec;

use super::eigen::temple_eigen;
use super::{AnalysisError, CLEAR_THRESHOLD, SET_THRESHOLD};
use crate::constitutive::TempleFlux;
use crate::function::{Bivariate, BivariateFn};
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlagState {
    Set,
    Cleared,
    Indeterminate,
    /// The test cannot be posed, e.g. the default chart is singular.
    NotApplicable,
}

impl FlagState {
    pub fn from_residual(r: f64) -> Self {
        if r <= SET_THRESHOLD {
            FlagState::Set
        } else if r >= CLEAR_THRESHOLD {
            FlagState::Cleared
        } else {
            FlagState::Indeterminate
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            FlagState::Set => "set",
            FlagState::Cleared => "cleared",
            FlagState::Indeterminate => "indeterminate",
            FlagState::NotApplicable => "not_applicable",
        }
    }
}

/// A flag with its evidence: the largest normalized residual over the
/// samples that entered the test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Flag {
    pub state: FlagState,
    pub residual: f64,
    pub samples_used: usize,
}

impl Flag {
    pub(crate) fn from_residuals(rs: &[f64]) -> Self {
        if rs.is_empty() {
            return Flag {
                state: FlagState::NotApplicable,
                residual: f64::NAN,
                samples_used: 0,
            };
        }
        let r = rs.iter().fold(
            0.0f64,
            |m, x| if x.is_nan() { f64::INFINITY } else { m.max(*x) },
        );
        Flag {
            state: FlagState::from_residual(r),
            residual: r,
            samples_used: rs.len(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassificationReport {
    /// `λ1 ≡ λ2`, i.e. `P = P(u/v)`.
    pub equal_eigenvalues: Flag,
    /// `∇λ1·d1 ≡ 0`.
    pub completely_exceptional: Flag,
    /// `vP_v ≡ uP_u`, i.e. `P = P(uv)`.
    pub hamiltonian: Flag,
    /// The α-equation of the diagonal form does not involve `u/v`.
    pub decouples: Flag,
    pub user_chart: bool,
}

/// Residual of the decoupling condition at one state, or `None` where the
/// `(α, u/v)` chart is singular.
pub(crate) fn decoupling_residual(alpha: &BivariateFn, u: f64, v: f64) -> Option<f64> {
    if v == 0.0 {
        return None;
    }
    let [au, av] = alpha.gradient(u, v);
    let [[auu, auv], [_, avv]] = alpha.hessian(u, v);
    let g = au * u + av * v;
    let det = -g / (v * v);
    let scale = (math::abs(au * u) + math::abs(av * v)) / (v * v);
    if !(math::abs(det) > 1e-12 * scale.max(f64::MIN_POSITIVE)) {
        return None;
    }
    let du = -av / det;
    let dv = au / det;
    let gu = auu * u + auv * v + au;
    let gv = auv * u + avv * v + av;
    let (a, b) = (gu * du, gv * dv);
    Some(math::abs(a + b) / (math::abs(a) + math::abs(b)).max(1.0))
}

/// Degeneracy flags of the Temple flux over a sample set. The decoupling
/// test uses the chart `α = P` unless `chart` is given; singular samples
/// are skipped for the default chart and rejected for a user chart.
pub fn classify(
    f: &TempleFlux,
    samples: &[(f64, f64)],
    chart: Option<&BivariateFn>,
) -> Result<ClassificationReport, AnalysisError> {
    if samples.is_empty() {
        return Err(AnalysisError::EmptySamples);
    }
    let mut eq = Vec::with_capacity(samples.len());
    let mut ex = Vec::with_capacity(samples.len());
    let mut ham = Vec::with_capacity(samples.len());
    let mut dec = Vec::with_capacity(samples.len());
    let alpha = chart.unwrap_or(f.function());
    for &(u, v) in samples {
        let e = temple_eigen(f, u, v)?;
        eq.push(math::abs(e.lambda1 - e.lambda2) / 1f64.max(e.lambda1.abs()).max(e.lambda2.abs()));
        let n1 = math::hypot(e.grad_lambda1[0], e.grad_lambda1[1]) * math::hypot(e.d1[0], e.d1[1]);
        ex.push(math::abs(e.ld1) / n1.max(1.0));
        let [pu, pv] = e.grad_lambda2;
        ham.push(math::abs(v * pv - u * pu) / (math::abs(v * pv) + math::abs(u * pu)).max(1.0));
        match decoupling_residual(alpha, u, v) {
            Some(r) => dec.push(r),
            None if chart.is_some() => return Err(AnalysisError::ChartFailure { u, v }),
            None => {}
        }
    }
    Ok(ClassificationReport {
        equal_eigenvalues: Flag::from_residuals(&eq),
        completely_exceptional: Flag::from_residuals(&ex),
        hamiltonian: Flag::from_residuals(&ham),
        decouples: Flag::from_residuals(&dec),
        user_chart: chart.is_some(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lattice() -> Vec<(f64, f64)> {
        let mut s = Vec::new();
        for i in 1..=5 {
            for j in 1..=5 {
                s.push((0.3 * i as f64, 0.25 * j as f64 + 0.1));
            }
        }
        s
    }

    #[test]
    fn product_is_hamiltonian() {
        let r = classify(&TempleFlux::new(BivariateFn::Product), &lattice(), None).unwrap();
        assert_eq!(r.hamiltonian.state, FlagState::Set);
        assert_eq!(r.equal_eigenvalues.state, FlagState::Cleared);
        assert_eq!(r.decouples.state, FlagState::Set);
    }

    #[test]
    fn ratio_is_completely_exceptional() {
        let r = classify(&TempleFlux::new(BivariateFn::Ratio), &lattice(), None).unwrap();
        assert_eq!(r.equal_eigenvalues.state, FlagState::Set);
        assert_eq!(r.completely_exceptional.state, FlagState::Set);
        assert_eq!(r.decouples.state, FlagState::NotApplicable);
    }

    #[test]
    fn sum_of_squares_is_not_hamiltonian() {
        let r = classify(
            &TempleFlux::new(BivariateFn::SumSquares { scale: 1.0 }),
            &lattice(),
            None,
        )
        .unwrap();
        assert_eq!(r.hamiltonian.state, FlagState::Cleared);
        assert_eq!(r.completely_exceptional.state, FlagState::Cleared);
        assert_eq!(r.decouples.state, FlagState::Set);
    }

    #[test]
    fn singular_user_chart_is_an_error() {
        let r = classify(
            &TempleFlux::new(BivariateFn::Product),
            &lattice(),
            Some(&BivariateFn::Ratio),
        );
        assert!(matches!(r, Err(AnalysisError::ChartFailure { .. })));
    }

    #[test]
    fn exp_difference_chart_decouples() {
        // α_u u + α_v v = aα(u − v) is not constant, but it is the function
        // α(ln α − c) of α alone, so the decoupling condition holds.
        let alpha = BivariateFn::ExpDifference { a: 1.0, c: 0.0 };
        let p = TempleFlux::new(alpha.clone());
        let r = classify(&p, &[(0.4, 1.3), (1.5, 0.2), (0.7, 0.9)], Some(&alpha)).unwrap();
        assert_eq!(r.decouples.state, FlagState::Set);
    }

    #[test]
    fn thresholds() {
        assert_eq!(FlagState::from_residual(1e-9), FlagState::Set);
        assert_eq!(FlagState::from_residual(1e-6), FlagState::Indeterminate);
        assert_eq!(FlagState::from_residual(1e-3), FlagState::Cleared);
    }
}
