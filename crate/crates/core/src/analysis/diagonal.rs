use alloc::vec::Vec;

use super::classify::{decoupling_residual, Flag};
use super::AnalysisError;
use crate::constitutive::TempleFlux;
use crate::function::{Bivariate, BivariateFn, ProfileFunction};
use crate::math;

/// Temple system in the variables `α` (with `P = R(α)`) and `βR = u/v`:
/// `α_t = f α_x`, `βR_t = R(α) βR_x`, where `f = R′(α)(α_u u + α_v v) + R`.
#[derive(Debug, Clone)]
pub struct DiagonalForm {
    pub alpha: BivariateFn,
    pub r: ProfileFunction,
    /// Whether `f` depends on `α` alone over the samples.
    pub decouples: Flag,
}

impl DiagonalForm {
    pub fn alpha_value(&self, u: f64, v: f64) -> f64 {
        self.alpha.value(u, v)
    }

    pub fn beta_r(&self, u: f64, v: f64) -> f64 {
        u / v
    }

    /// Speed `f` of the `α` equation.
    pub fn effective_speed(&self, u: f64, v: f64) -> f64 {
        let a = self.alpha.value(u, v);
        let [au, av] = self.alpha.gradient(u, v);
        self.r.d1(a) * (au * u + av * v) + self.r.value(a)
    }

    /// `(f, R)`: the speeds of the `α` and `βR` equations.
    pub fn speeds(&self, u: f64, v: f64) -> (f64, f64) {
        (
            self.effective_speed(u, v),
            self.r.value(self.alpha.value(u, v)),
        )
    }
}

/// Checks `P = R(α)` and the regularity of the `(α, u/v)` chart at every
/// sample, then packages the diagonal form.
pub fn diagonal_form(
    f: &TempleFlux,
    alpha: BivariateFn,
    r: ProfileFunction,
    samples: &[(f64, f64)],
) -> Result<DiagonalForm, AnalysisError> {
    if samples.is_empty() {
        return Err(AnalysisError::EmptySamples);
    }
    let mut dec = Vec::with_capacity(samples.len());
    for &(u, v) in samples {
        let p = f.function().value(u, v);
        let residual = math::abs(p - r.value(alpha.value(u, v)));
        if !(residual <= 1e-10 * p.abs().max(1.0)) {
            return Err(AnalysisError::ChartMismatch { u, v, residual });
        }
        dec.push(decoupling_residual(&alpha, u, v).ok_or(AnalysisError::ChartFailure { u, v })?);
    }
    let decouples = Flag::from_residuals(&dec);
    Ok(DiagonalForm {
        alpha,
        r,
        decouples,
    })
}

/// `f(α) = 2αR′(α) + R(α)`, the `α`-speed in the chart `α = uv`.
pub fn uv_effective_speed(r: ProfileFunction) -> ProfileFunction {
    ProfileFunction::custom(move |a| 2.0 * a * r.d1(a) + r.value(a))
}

/// How the two speeds of the decoupled system relate.
#[derive(Debug, Clone)]
pub enum SpeedRelation {
    /// Chart `α = uv`, where the ODE reduces to `s2 − s1 + 2α s2′ = 0`
    /// independently of `R`.
    UvChart,
    /// General decoupled case: `R′(s2 − s1) + s2′(f − R) = 0`.
    General {
        r: ProfileFunction,
        f: ProfileFunction,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct S2Samples {
    pub alpha: Vec<f64>,
    pub s2: Vec<f64>,
}

/// Integrates the linear ODE for the symmetry coefficient `s2(α)` with
/// classical RK4 over `alpha_grid`, starting from `s2(alpha_grid[0]) =
/// s2_initial`.
pub fn symmetry_coefficient_s2(
    s1: &ProfileFunction,
    relation: &SpeedRelation,
    alpha_grid: &[f64],
    s2_initial: f64,
) -> Result<S2Samples, AnalysisError> {
    if alpha_grid.is_empty() {
        return Err(AnalysisError::EmptySamples);
    }
    let increasing = alpha_grid.len() < 2 || alpha_grid[1] > alpha_grid[0];
    if alpha_grid.windows(2).any(|w| {
        if increasing {
            !(w[1] > w[0])
        } else {
            !(w[1] < w[0])
        }
    }) {
        return Err(AnalysisError::InvalidParameter(
            "α grid must be strictly monotone",
        ));
    }
    let rhs = |a: f64, s2: f64| -> Result<f64, AnalysisError> {
        let (num, den) = match relation {
            SpeedRelation::UvChart => (s2 - s1.value(a), 2.0 * a),
            SpeedRelation::General { r, f } => {
                (r.d1(a) * (s2 - s1.value(a)), f.value(a) - r.value(a))
            }
        };
        if !(math::abs(den) >= 1e-12) {
            return Err(AnalysisError::CoincidenceOfSpeeds { alpha: a });
        }
        Ok(-num / den)
    };
    let mut s2 = Vec::with_capacity(alpha_grid.len());
    let mut y = s2_initial;
    rhs(alpha_grid[0], y)?;
    s2.push(y);
    for w in alpha_grid.windows(2) {
        let (a, h) = (w[0], w[1] - w[0]);
        let k1 = rhs(a, y)?;
        let k2 = rhs(a + 0.5 * h, y + 0.5 * h * k1)?;
        let k3 = rhs(a + 0.5 * h, y + 0.5 * h * k2)?;
        let k4 = rhs(a + h, y + h * k3)?;
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        s2.push(y);
    }
    Ok(S2Samples {
        alpha: alpha_grid.to_vec(),
        s2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::FlagState;
    use alloc::vec;

    fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect()
    }

    #[test]
    fn uv_chart_speed() {
        let r = ProfileFunction::Poly(vec![1.0, 0.5, 0.25]);
        let flux = TempleFlux::new(BivariateFn::ProductForm(r.clone()));
        let samples = [(0.5, 1.2), (1.3, 0.4), (2.0, 2.0)];
        let d = diagonal_form(&flux, BivariateFn::Product, r.clone(), &samples).unwrap();
        assert_eq!(d.decouples.state, FlagState::Set);
        let f = uv_effective_speed(r.clone());
        for (u, v) in samples {
            let a = u * v;
            assert!((d.effective_speed(u, v) - (2.0 * a * r.d1(a) + r.value(a))).abs() < 1e-13);
            assert!((d.effective_speed(u, v) - f.value(a)).abs() < 1e-13);
        }
    }

    #[test]
    fn constant_r_gives_equal_speeds() {
        let flux = TempleFlux::new(BivariateFn::Const(2.0));
        let d = diagonal_form(
            &flux,
            BivariateFn::Product,
            ProfileFunction::Const(2.0),
            &[(1.0, 1.0)],
        )
        .unwrap();
        assert_eq!(d.speeds(1.0, 1.0), (2.0, 2.0));
    }

    #[test]
    fn mismatched_chart_rejected() {
        let flux = TempleFlux::new(BivariateFn::SumSquares { scale: 1.0 });
        let r = diagonal_form(
            &flux,
            BivariateFn::Product,
            ProfileFunction::Linear { k: 1.0 },
            &[(1.0, 2.0)],
        );
        assert!(matches!(r, Err(AnalysisError::ChartMismatch { .. })));
    }

    #[test]
    fn s2_homogeneous_solution() {
        let g = grid(1.0, 4.0, 300);
        let s = symmetry_coefficient_s2(
            &ProfileFunction::Const(0.0),
            &SpeedRelation::UvChart,
            &g,
            2.0,
        )
        .unwrap();
        for (a, y) in s.alpha.iter().zip(&s.s2) {
            assert!((y - 2.0 / a.sqrt()).abs() < 1e-10);
        }
    }

    #[test]
    fn s2_with_constant_source() {
        let g = grid(0.5, 3.0, 300);
        let c = 0.7;
        let s =
            symmetry_coefficient_s2(&ProfileFunction::Const(c), &SpeedRelation::UvChart, &g, 1.0)
                .unwrap();
        let cst = (1.0 - c) * 0.5f64.sqrt();
        for (a, y) in s.alpha.iter().zip(&s.s2) {
            assert!((y - (c + cst / a.sqrt())).abs() < 1e-10);
        }
    }

    #[test]
    fn general_form_matches_uv_chart() {
        let r = ProfileFunction::Poly(vec![1.0, 0.3]);
        let rel = SpeedRelation::General {
            r: r.clone(),
            f: uv_effective_speed(r),
        };
        let s1 = ProfileFunction::Sine {
            amp: 0.2,
            freq: 1.0,
            offset: 0.1,
        };
        let g = grid(0.5, 2.5, 200);
        let a = symmetry_coefficient_s2(&s1, &rel, &g, 0.4).unwrap();
        let b = symmetry_coefficient_s2(&s1, &SpeedRelation::UvChart, &g, 0.4).unwrap();
        for (x, y) in a.s2.iter().zip(&b.s2) {
            assert!((x - y).abs() < 1e-8);
        }
    }

    #[test]
    fn coincident_speeds() {
        let r = ProfileFunction::Poly(vec![1.0, 0.3]);
        let rel = SpeedRelation::General { r: r.clone(), f: r };
        let e =
            symmetry_coefficient_s2(&ProfileFunction::Const(1.0), &rel, &grid(1.0, 2.0, 10), 0.0);
        assert!(matches!(e, Err(AnalysisError::CoincidenceOfSpeeds { .. })));
    }
}
