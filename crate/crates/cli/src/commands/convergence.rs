use serde_json::json;
use shearwave_core::exact::{eval_asymptotic_linear, CarrollWave};
use shearwave_core::simulate::{evolve_asymptotic, evolve_full, FULL_FIELDS, STRAIN_FIELDS};
use shearwave_core::verify::{convergence_study, Reference, VerifyError};
use shearwave_core::{Grid1D, StateGrid};

use super::{cell_averages, exact_error};
use crate::config::{ConvergenceCmd, ConvergenceInitial, ConvergenceSystem, Norm, ReferenceKind};
use crate::error::CliError;
use crate::output::{num, Artifacts};
use crate::Outcome;

fn state<const K: usize>(
    grid: &Grid1D,
    names: [&'static str; K],
    rows: Vec<[f64; K]>,
) -> StateGrid {
    let cols = (0..K)
        .map(|k| rows.iter().map(|r| r[k]).collect())
        .collect();
    StateGrid::new(*grid, names.to_vec(), cols).expect("one value per cell")
}

pub fn run(cmd: &ConvergenceCmd, out: &mut Artifacts) -> Result<Outcome, CliError> {
    let grids = cmd
        .cells
        .iter()
        .map(|&n| cmd.grid.with_cells(n))
        .collect::<Result<Vec<_>, _>>()?;
    let report = match (&cmd.system, &cmd.initial) {
        (
            ConvergenceSystem::Full { modulus },
            ConvergenceInitial::Carroll {
                amplitude,
                wavenumber,
                polarization,
                periods,
            },
        ) => {
            let m = modulus.build()?;
            let w = CarrollWave::new(&m, *amplitude, *wavenumber, (*polarization).into())
                .map_err(exact_error)?;
            let scheme = cmd.scheme.build(periods.map(|p| p * w.period()))?;
            let end = scheme.end;
            let exact = move |x: f64| {
                let s = w.eval_full(x, end);
                vec![s.u, s.m, s.v, s.n]
            };
            let run = |g: &Grid1D| -> Result<StateGrid, VerifyError> {
                let init = state(
                    g,
                    FULL_FIELDS,
                    cell_averages(g, |x| {
                        let s = w.eval_full(x, 0.0);
                        [s.u, s.m, s.v, s.n]
                    }),
                );
                Ok(evolve_full(&m, &init, &scheme)?.last().state.clone())
            };
            study(&grids, &FULL_FIELDS, run, cmd.reference, &exact)
        }
        (
            ConvergenceSystem::Asymptotic { beta },
            ConvergenceInitial::ConstantModulus { amplitude, theta },
        ) => {
            let (beta, a, th) = (*beta, *amplitude, theta.build());
            let scheme = cmd.scheme.build(None)?;
            let end = scheme.end;
            let exact = |tau: f64| {
                let s = eval_asymptotic_linear(beta, a, &th, end, tau);
                vec![s.u, s.v]
            };
            let run = |g: &Grid1D| -> Result<StateGrid, VerifyError> {
                let init = state(
                    g,
                    STRAIN_FIELDS,
                    cell_averages(g, |tau| {
                        let s = eval_asymptotic_linear(beta, a, &th, 0.0, tau);
                        [s.u, s.v]
                    }),
                );
                Ok(evolve_asymptotic(beta, &init, &scheme)?
                    .last()
                    .state
                    .clone())
            };
            study(&grids, &STRAIN_FIELDS, run, cmd.reference, &exact)
        }
        _ => {
            return Err(CliError::Config(
                "initial data kind does not match the system".into(),
            ))
        }
    }
    .map_err(|e| match e {
        VerifyError::SolverFailure(e) => super::simulate_error(e),
        VerifyError::OracleFailure(e) => exact_error(e),
        VerifyError::Other(m) => CliError::Config(m),
        other => CliError::solver(other),
    })?;

    let rows = report
        .levels
        .iter()
        .map(|l| [l.n as f64, l.h, l.linf, l.l1, l.l2]);
    out.csv("convergence.csv", &["cells", "h", "linf", "l1", "l2"], rows)?;
    let order = match cmd.target.norm {
        Norm::Linf => report.order_linf,
        Norm::L1 => report.order_l1,
        Norm::L2 => report.order_l2,
    };
    let passed = (order - cmd.target.order).abs() <= cmd.target.tolerance;
    Ok(Outcome {
        passed,
        summary: json!({
            "order_linf": num(report.order_linf),
            "order_l1": num(report.order_l1),
            "order_l2": num(report.order_l2),
            "pairwise_linf": report.pairwise.iter().copied().map(num).collect::<Vec<_>>(),
            "measured": num(order),
            "target": cmd.target.order,
            "tolerance": cmd.target.tolerance,
        }),
    })
}

fn study(
    grids: &[Grid1D],
    fields: &[&'static str],
    run: impl FnMut(&Grid1D) -> Result<StateGrid, VerifyError>,
    reference: ReferenceKind,
    exact: &dyn Fn(f64) -> Vec<f64>,
) -> Result<shearwave_core::verify::ConvergenceReport, VerifyError> {
    let reference = match reference {
        ReferenceKind::Exact => Reference::Exact(exact),
        ReferenceKind::SelfFinest => Reference::SelfFinest,
    };
    convergence_study(grids, fields, run, reference)
}
