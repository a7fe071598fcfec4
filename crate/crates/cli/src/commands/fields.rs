//! Builds sampled fields for the exact and verify commands.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use shearwave_core::exact::{
    eval_asymptotic_linear, eval_generalized_carroll, eval_overdetermined, eval_separable,
    hodograph_field, simple_wave_field, CarrollWave, HodographData,
};
use shearwave_core::{Axis, SampledField, TempleFlux};

use super::exact_error;
use crate::config::{ExactSolution, FullField, PolarField, TempleField};
use crate::error::CliError;

/// Which residual an exact family satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Full,
    Asymptotic,
    Temple,
}

impl ExactSolution {
    pub fn family(&self) -> Family {
        match self {
            Self::Carroll { .. } | Self::GeneralizedCarroll { .. } => Family::Full,
            Self::ConstantModulus { .. } | Self::SimpleWave { .. } | Self::Hodograph { .. } => {
                Family::Asymptotic
            }
            Self::Overdetermined { .. } | Self::Separable { .. } => Family::Temple,
        }
    }

    /// Coordinate labels for the row and column axes.
    pub fn labels(&self) -> (&'static str, &'static str) {
        match self.family() {
            Family::Asymptotic => ("X", "tau"),
            _ => ("t", "x"),
        }
    }

    pub fn sample(&self, rows: Axis, cols: Axis) -> Result<SampledField, CliError> {
        match self {
            Self::Carroll {
                modulus,
                amplitude,
                wavenumber,
                polarization,
            } => {
                let m = modulus.build()?;
                let w = CarrollWave::new(&m, *amplitude, *wavenumber, (*polarization).into())
                    .map_err(exact_error)?;
                Ok(SampledField::from_fn(
                    rows,
                    cols,
                    ["U", "M", "V", "N"],
                    |t, x| {
                        let s = w.eval_full(x, t);
                        [s.u, s.m, s.v, s.n]
                    },
                ))
            }
            Self::GeneralizedCarroll {
                modulus,
                amplitude,
                profile,
                direction,
                polarization,
            } => {
                let m = modulus.build()?;
                let f = profile.build();
                SampledField::try_from_fn(rows, cols, ["U", "V"], |t, x| {
                    let s = eval_generalized_carroll(
                        &m,
                        *amplitude,
                        &f,
                        (*direction).into(),
                        (*polarization).into(),
                        x,
                        t,
                    )?;
                    Ok([s.u, s.v])
                })
                .map_err(exact_error)
            }
            Self::ConstantModulus {
                beta,
                amplitude,
                theta,
            } => polar(
                *beta,
                &PolarField::ConstantModulus {
                    amplitude: *amplitude,
                    theta: theta.clone(),
                },
                rows,
                cols,
            ),
            Self::SimpleWave { beta, phi } => polar(
                *beta,
                &PolarField::SimpleWave { phi: phi.clone() },
                rows,
                cols,
            ),
            Self::Hodograph { beta, s3, s4, seed } => polar(
                *beta,
                &PolarField::Hodograph {
                    s3: s3.clone(),
                    s4: s4.clone(),
                    seed: *seed,
                },
                rows,
                cols,
            ),
            Self::Overdetermined {
                flux,
                level,
                profile,
                direction,
                v_bracket,
            } => temple(
                &flux.build(),
                &TempleField::Overdetermined {
                    level: *level,
                    profile: profile.clone(),
                    direction: *direction,
                    v_bracket: *v_bracket,
                },
                rows,
                cols,
                None,
            ),
            Self::Separable {
                flux,
                k,
                phi0,
                dphi0,
            } => temple(
                &flux.build(),
                &TempleField::Separable {
                    k: *k,
                    phi0: *phi0,
                    dphi0: *dphi0,
                },
                rows,
                cols,
                None,
            ),
        }
    }
}

/// Samples `build` on `count` nested refinements of `(rows, cols)`.
pub fn levels(
    rows: Axis,
    cols: Axis,
    count: usize,
    mut build: impl FnMut(Axis, Axis) -> Result<SampledField, CliError>,
) -> Result<Vec<SampledField>, CliError> {
    let (mut r, mut c) = (rows, cols);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        out.push(build(r, c)?);
        r = r.halved();
        c = c.halved();
    }
    Ok(out)
}

/// Fields `"theta"`, `"rho"` (and `"U"`, `"V"` where cheap) over `(X, τ)`.
pub fn polar(
    beta: f64,
    field: &PolarField,
    rows: Axis,
    cols: Axis,
) -> Result<SampledField, CliError> {
    match field {
        PolarField::ConstantModulus { amplitude, theta } => {
            let th = theta.build();
            Ok(SampledField::from_fn(
                rows,
                cols,
                ["theta", "rho", "U", "V"],
                |x, tau| {
                    let s = eval_asymptotic_linear(beta, *amplitude, &th, x, tau);
                    let xi = beta * amplitude * amplitude * x + tau;
                    [th.value(xi), *amplitude, s.u, s.v]
                },
            ))
        }
        PolarField::Hodograph { s3, s4, seed } => {
            let h = HodographData::new(s3.build(), s4.build());
            hodograph_field(&h, beta, rows, cols, (*seed).into()).map_err(exact_error)
        }
        PolarField::SimpleWave { phi } => {
            let f = simple_wave_field(beta, &phi.build(), rows, cols).map_err(exact_error)?;
            let zeros = vec![0.0; rows.len * cols.len];
            Ok(f.with_field("theta", zeros))
        }
        PolarField::ArbitraryTheta {
            rho,
            theta_x,
            theta_tau,
        } => {
            let (f, g) = (theta_x.build(), theta_tau.build());
            Ok(SampledField::from_fn(
                rows,
                cols,
                ["theta", "rho"],
                |x, tau| [f.value(x) + g.value(tau), *rho],
            ))
        }
    }
}

/// Fields `"U"`, `"V"` over `(t, x)` for the full system.
pub fn full(
    m: &shearwave_core::ShearModulus,
    field: &FullField,
    rows: Axis,
    cols: Axis,
    rng: &mut ChaCha8Rng,
) -> Result<SampledField, CliError> {
    match field {
        FullField::Carroll {
            amplitude,
            wavenumber,
            polarization,
        } => {
            let w = CarrollWave::new(m, *amplitude, *wavenumber, (*polarization).into())
                .map_err(exact_error)?;
            Ok(SampledField::from_fn(rows, cols, ["U", "V"], |t, x| {
                let s = w.eval(x, t);
                [s.u, s.v]
            }))
        }
        FullField::Zero => Ok(SampledField::from_fn(rows, cols, ["U", "V"], |_, _| {
            [0.0, 0.0]
        })),
        FullField::Noise { amplitude } => Ok(noise(rows, cols, *amplitude, rng)),
    }
}

fn noise(rows: Axis, cols: Axis, amplitude: f64, rng: &mut ChaCha8Rng) -> SampledField {
    let a = amplitude.abs().max(f64::MIN_POSITIVE);
    SampledField::from_fn(rows, cols, ["U", "V"], |_, _| {
        [rng.gen_range(-a..a), rng.gen_range(-a..a)]
    })
}

/// Fields `"U"`, `"V"` over `(t, x)` for the Temple system.
pub fn temple(
    flux: &TempleFlux,
    field: &TempleField,
    rows: Axis,
    cols: Axis,
    rng: Option<&mut ChaCha8Rng>,
) -> Result<SampledField, CliError> {
    match field {
        TempleField::Separable { k, phi0, dphi0 } => {
            let ts: Vec<f64> = (0..rows.len).map(|i| rows.coord(i)).collect();
            // The integration starts at the first row, which holds the data.
            let sol = eval_separable(flux, *k, *phi0, *dphi0, &ts).map_err(exact_error)?;
            SampledField::from_columns(rows, cols, ["U", "V"], |x| {
                let (u, v) = (0..rows.len)
                    .map(|i| sol.eval(i, x))
                    .map(|s| (s.u, s.v))
                    .unzip();
                Ok::<_, CliError>([u, v])
            })
        }
        TempleField::Overdetermined {
            level,
            profile,
            direction,
            v_bracket,
        } => {
            let f = profile.build();
            SampledField::try_from_fn(rows, cols, ["U", "V"], |t, x| {
                let bracket = (v_bracket[0], v_bracket[1]);
                let s = eval_overdetermined(flux, *level, &f, (*direction).into(), x, t, bracket)?;
                Ok([s.u, s.v])
            })
            .map_err(exact_error)
        }
        TempleField::Noise { amplitude } => match rng {
            Some(rng) => Ok(noise(rows, cols, *amplitude, rng)),
            None => Err(CliError::Config("noise fields need a random seed".into())),
        },
    }
}
