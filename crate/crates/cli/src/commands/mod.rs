mod classify;
mod convergence;
mod exact;
mod fields;
mod simulate;
mod verify;

use serde_json::{json, Value};
use shearwave_core::exact::ExactError;
use shearwave_core::simulate::SimulateError;
use shearwave_core::Grid1D;

use crate::config::{Command, RunConfig};
use crate::error::CliError;
use crate::output::{num, Artifacts};
use crate::Outcome;

pub fn execute(cfg: &RunConfig, out: &mut Artifacts) -> Result<Outcome, CliError> {
    match &cfg.command {
        Command::Simulate(c) => simulate::run(c, out),
        Command::Exact(c) => exact::run(c, out),
        Command::Classify(c) => classify::classify(c, out),
        Command::Hodograph(c) => classify::hodograph(c, out),
        Command::Verify(c) => verify::run(c, cfg.seed, out),
        Command::Convergence(c) => convergence::run(c, out),
    }
}

pub(crate) fn exact_error(e: ExactError) -> CliError {
    let locus = match e {
        ExactError::NoConvergence { x, tau } | ExactError::FoldCrossed { x, tau } => {
            Some(json!({ "X": num(x), "tau": num(tau) }))
        }
        ExactError::SingularJacobian { theta, rho } => {
            Some(json!({ "theta": num(theta), "rho": num(rho) }))
        }
        ExactError::StepFailure { t } => Some(json!({ "t": num(t) })),
        _ => None,
    };
    CliError::Solver {
        message: e.to_string(),
        locus,
    }
}

pub(crate) fn simulate_error(e: SimulateError) -> CliError {
    let locus = match e {
        SimulateError::HyperbolicityLoss { coord, .. }
        | SimulateError::BlowupDetected { coord, .. } => Some(json!({ "coord": num(coord) })),
        _ => None,
    };
    CliError::Solver {
        message: e.to_string(),
        locus,
    }
}

/// Three-point Gauss average of `f` over every cell.
pub(crate) fn cell_averages<const K: usize>(
    grid: &Grid1D,
    mut f: impl FnMut(f64) -> [f64; K],
) -> Vec<[f64; K]> {
    let h = grid.spacing();
    let g = 0.5 * h * 0.6f64.sqrt();
    grid.centers()
        .map(|c| {
            let (a, b, m) = (f(c - g), f(c + g), f(c));
            std::array::from_fn(|k| (5.0 * a[k] + 8.0 * m[k] + 5.0 * b[k]) / 18.0)
        })
        .collect()
}

pub(crate) fn residual_json(r: &shearwave_core::verify::ResidualReport) -> Value {
    json!({
        "order": num(r.order),
        "identically_zero": r.identically_zero,
        "target": r.target,
        "pass": r.pass,
        "no_decay": r.no_decay(),
        "levels": r.levels.iter().map(|l| json!({
            "h": num(l.h), "linf": num(l.linf), "l2": num(l.l2), "scale": num(l.scale),
        })).collect::<Vec<_>>(),
    })
}
