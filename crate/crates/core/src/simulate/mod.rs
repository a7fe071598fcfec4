//! Conservative finite-volume evolution of
//!
//! - the full strain system in `t` ([`evolve_full`]),
//! - the asymptotic system in `X` on a `τ` grid ([`evolve_asymptotic`]),
//! - the scalar cubic law `ρ_X = β(ρ³)_τ` ([`evolve_scalar`]),
//! - the Temple family `u_t = [P u]_x`, `v_t = [P v]_x` ([`evolve_temple`]),
//!
//! with CFL control and a gradient monitor that records where smooth data
//! steepens.

mod kernel;
mod laws;

use alloc::vec::Vec;
use thiserror::Error;

pub use kernel::Scheme;

use crate::constitutive::{ConstitutiveError, ShearModulus};
use crate::function::{BivariateFn, ProfileFunction};
use crate::math;
use crate::state::{Grid1D, StateGrid};
use kernel::{max_gradient, total_variation, ConservationLaw, Stepper};

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum SimulateError {
    #[error("invalid simulation config: {0}")]
    InvalidConfig(&'static str),
    #[error("initial data lacks field {0}")]
    MissingField(&'static str),
    #[error("hyperbolicity lost at coordinate {coord} (λ² = {lambda_sq})")]
    HyperbolicityLoss { coord: f64, lambda_sq: f64 },
    #[error("blowup detected at coordinate {coord}: max gradient {max_gradient}")]
    BlowupDetected { coord: f64, max_gradient: f64 },
    #[error("step limit of {0} reached")]
    StepLimit(usize),
    #[error(transparent)]
    Constitutive(#[from] ConstitutiveError),
}

/// When snapshots are recorded. The initial and final states are always
/// kept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SnapshotPolicy {
    /// Every `k`-th step.
    Stride(usize),
    /// At every multiple of the given coordinate interval; steps are
    /// shortened to land on them exactly.
    Interval(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig {
    pub scheme: Scheme,
    pub cfl: f64,
    /// Final value of the evolution coordinate (`t` or `X`).
    pub end: f64,
    pub snapshots: SnapshotPolicy,
    /// Gradient growth factor that trips the monitor.
    pub blowup_factor: f64,
    pub max_steps: usize,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            scheme: Scheme::LaxFriedrichs,
            cfl: 0.5,
            end: 1.0,
            snapshots: SnapshotPolicy::Stride(usize::MAX),
            blowup_factor: 50.0,
            max_steps: 50_000_000,
        }
    }
}

impl SimulationConfig {
    pub fn new(scheme: Scheme, cfl: f64, end: f64) -> Self {
        Self {
            scheme,
            cfl,
            end,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), SimulateError> {
        if !(self.cfl > 0.0 && self.cfl <= 0.9) {
            return Err(SimulateError::InvalidConfig("cfl must lie in (0, 0.9]"));
        }
        if !(self.end > 0.0 && self.end.is_finite()) {
            return Err(SimulateError::InvalidConfig(
                "end coordinate must be positive",
            ));
        }
        match self.snapshots {
            SnapshotPolicy::Stride(0) => {
                return Err(SimulateError::InvalidConfig("snapshot stride must be >= 1"))
            }
            SnapshotPolicy::Interval(d) if !(d > 0.0 && d.is_finite()) => {
                return Err(SimulateError::InvalidConfig(
                    "snapshot interval must be positive",
                ))
            }
            _ => {}
        }
        if !(self.blowup_factor > 1.0) {
            return Err(SimulateError::InvalidConfig("blowup factor must exceed 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub coord: f64,
    pub state: StateGrid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepDiagnostics {
    /// Evolution coordinate after the step.
    pub coord: f64,
    pub dt: f64,
    pub max_speed: f64,
    pub max_gradient: f64,
    pub total_variation: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub snapshots: Vec<Snapshot>,
    pub diagnostics: Vec<StepDiagnostics>,
    pub initial_max_gradient: f64,
    pub initial_total_variation: Vec<f64>,
    /// First coordinate where the max gradient exceeded
    /// `blowup_factor ×` its initial value.
    pub gradient_alarm: Option<f64>,
}

impl Trajectory {
    pub fn last(&self) -> &Snapshot {
        self.snapshots
            .last()
            .expect("trajectory always holds the initial snapshot")
    }

    /// First coordinate where the max gradient exceeds `factor ×` its
    /// initial value.
    pub fn first_gradient_growth(&self, factor: f64) -> Option<f64> {
        if self.initial_max_gradient <= 0.0 {
            return None;
        }
        self.diagnostics
            .iter()
            .find(|d| d.max_gradient > factor * self.initial_max_gradient)
            .map(|d| d.coord)
    }
}

/// `cfl·h/max_speed`, capped by the remaining interval. A vanishing speed
/// yields the cap.
pub fn cfl_step(max_speed: f64, h: f64, cfl: f64, remaining: f64) -> f64 {
    if !(max_speed > 0.0) || !max_speed.is_finite() {
        return remaining;
    }
    let dt = cfl * h / max_speed;
    if dt < remaining {
        dt
    } else {
        remaining
    }
}

fn collect<const N: usize>(
    init: &StateGrid,
    names: [&'static str; N],
) -> Result<Vec<[f64; N]>, SimulateError> {
    let mut cols = Vec::with_capacity(N);
    for name in names {
        cols.push(init.field(name).ok_or(SimulateError::MissingField(name))?);
    }
    Ok((0..init.grid().cells())
        .map(|i| {
            let mut q = [0.0; N];
            for k in 0..N {
                q[k] = cols[k][i];
            }
            q
        })
        .collect())
}

fn to_state<const N: usize>(grid: Grid1D, names: [&'static str; N], q: &[[f64; N]]) -> StateGrid {
    let fields = (0..N).map(|k| q.iter().map(|c| c[k]).collect()).collect();
    StateGrid::new(grid, names.to_vec(), fields).expect("lengths match grid")
}

fn run<L: ConservationLaw<N>, const N: usize>(
    law: &L,
    init: &StateGrid,
    names: [&'static str; N],
    cfg: &SimulationConfig,
) -> Result<Trajectory, SimulateError> {
    cfg.validate()?;
    let grid = *init.grid();
    let h = grid.spacing();
    let boundary = grid.boundary();
    let mut q = collect(init, names)?;
    let mut stepper = Stepper::<N>::new(grid.cells(), boundary);

    let g0 = max_gradient(&q, h, boundary);
    let tv0 = total_variation(&q, boundary);
    let mut traj = Trajectory {
        snapshots: alloc::vec![Snapshot {
            coord: 0.0,
            state: to_state(grid, names, &q)
        }],
        diagnostics: Vec::new(),
        initial_max_gradient: g0,
        initial_total_variation: tv0.to_vec(),
        gradient_alarm: None,
    };

    let mut coord = 0.0;
    let mut step = 0usize;
    let mut next_snap = match cfg.snapshots {
        SnapshotPolicy::Interval(d) => d.min(cfg.end),
        SnapshotPolicy::Stride(_) => cfg.end,
    };
    let mut snap_index = 1usize;
    while coord < cfg.end {
        if step >= cfg.max_steps {
            return Err(SimulateError::StepLimit(cfg.max_steps));
        }
        let mut smax: f64 = 0.0;
        for c in &q {
            let s = law.max_speed(c).map_err(|e| at_coord(e, coord))?;
            smax = smax.max(s);
        }
        let free = cfl_step(smax, h, cfg.cfl, f64::INFINITY);
        let target = next_snap.min(cfg.end);
        let remaining = target - coord;
        let (dt, lands) = if free >= remaining {
            (remaining, true)
        } else {
            (free, false)
        };
        stepper
            .step(law, cfg.scheme, &mut q, dt, h)
            .map_err(|e| at_coord(e, coord))?;
        step += 1;
        coord = if lands { target } else { coord + dt };

        let g = max_gradient(&q, h, boundary);
        let tv = total_variation(&q, boundary);
        traj.diagnostics.push(StepDiagnostics {
            coord,
            dt,
            max_speed: smax,
            max_gradient: g,
            total_variation: tv.to_vec(),
        });
        if traj.gradient_alarm.is_none() && g0 > 0.0 && g > cfg.blowup_factor * g0 {
            traj.gradient_alarm = Some(coord);
        }
        if !q.iter().all(|c| c.iter().all(|v| v.is_finite())) {
            return Err(SimulateError::BlowupDetected {
                coord,
                max_gradient: g,
            });
        }
        if traj.gradient_alarm.is_some() && free < 1e-9 * grid.length() {
            return Err(SimulateError::BlowupDetected {
                coord,
                max_gradient: g,
            });
        }

        let snap = match cfg.snapshots {
            SnapshotPolicy::Stride(k) => step.is_multiple_of(k) || coord >= cfg.end,
            SnapshotPolicy::Interval(d) => {
                if lands {
                    snap_index += 1;
                    next_snap = snap_index as f64 * d;
                    if next_snap > cfg.end * (1.0 - 1e-12) {
                        next_snap = cfg.end;
                    }
                    true
                } else {
                    false
                }
            }
        };
        if snap && traj.snapshots.last().map(|s| s.coord) != Some(coord) {
            traj.snapshots.push(Snapshot {
                coord,
                state: to_state(grid, names, &q),
            });
        }
    }
    Ok(traj)
}

fn at_coord(e: SimulateError, coord: f64) -> SimulateError {
    match e {
        SimulateError::HyperbolicityLoss { lambda_sq, .. } => {
            SimulateError::HyperbolicityLoss { coord, lambda_sq }
        }
        other => other,
    }
}

pub const FULL_FIELDS: [&str; 4] = ["U", "M", "V", "N"];
pub const STRAIN_FIELDS: [&str; 2] = ["U", "V"];
pub const SCALAR_FIELDS: [&str; 1] = ["rho"];
pub const TEMPLE_FIELDS: [&str; 2] = ["u", "v"];

/// Evolves `(U, M, V, N)` in `t`.
pub fn evolve_full(
    modulus: &ShearModulus,
    init: &StateGrid,
    cfg: &SimulationConfig,
) -> Result<Trajectory, SimulateError> {
    let law = laws::FullShear { modulus };
    let u = init.field("U").ok_or(SimulateError::MissingField("U"))?;
    let v = init.field("V").ok_or(SimulateError::MissingField("V"))?;
    for (&ui, &vi) in u.iter().zip(v) {
        modulus.eval_q(ui * ui + vi * vi)?;
        law.speeds_sq(ui, vi).map_err(|e| at_coord(e, 0.0))?;
    }
    run(&law, init, FULL_FIELDS, cfg)
}

/// Evolves `(U, V)` in `X` on a `τ` grid.
pub fn evolve_asymptotic(
    beta: f64,
    init: &StateGrid,
    cfg: &SimulationConfig,
) -> Result<Trajectory, SimulateError> {
    if !beta.is_finite() {
        return Err(SimulateError::InvalidConfig("beta must be finite"));
    }
    run(&laws::Asymptotic { beta }, init, STRAIN_FIELDS, cfg)
}

/// Evolves `ρ` under `ρ_X = β(ρ³)_τ`; shocks are captured weakly.
pub fn evolve_scalar(
    beta: f64,
    init: &StateGrid,
    cfg: &SimulationConfig,
) -> Result<Trajectory, SimulateError> {
    if !beta.is_finite() {
        return Err(SimulateError::InvalidConfig("beta must be finite"));
    }
    let rho = init
        .field("rho")
        .ok_or(SimulateError::MissingField("rho"))?;
    if rho.iter().any(|&r| !(r >= 0.0)) {
        return Err(SimulateError::InvalidConfig("rho must be non-negative"));
    }
    run(&laws::ScalarCubic { beta }, init, SCALAR_FIELDS, cfg)
}

/// Evolves `(u, v)` under `u_t = [P u]_x`, `v_t = [P v]_x`.
pub fn evolve_temple(
    p: &BivariateFn,
    init: &StateGrid,
    cfg: &SimulationConfig,
) -> Result<Trajectory, SimulateError> {
    run(&laws::Temple { p }, init, TEMPLE_FIELDS, cfg)
}

/// First `X` at which characteristics of `ρ_X − 3βρ²ρ_τ = 0` cross, for
/// initial data `ρ0` sampled on `tau_grid`; `+∞` when none converge.
pub fn breaking_estimate(beta: f64, rho0: &ProfileFunction, tau_grid: &[f64]) -> f64 {
    let steepest = tau_grid
        .iter()
        .map(|&t| 6.0 * beta * rho0.value(t) * rho0.d1(t))
        .fold(0.0f64, f64::max);
    if steepest > 0.0 {
        1.0 / steepest
    } else {
        f64::INFINITY
    }
}

/// Characteristic speeds `(slow, fast)` of the full system at a strain.
pub fn full_speeds(modulus: &ShearModulus, u: f64, v: f64) -> Result<(f64, f64), SimulateError> {
    let (slow, fast) = laws::FullShear { modulus }.speeds_sq(u, v)?;
    Ok((math::sqrt(slow), math::sqrt(fast)))
}
