use serde_json::{json, Value};
use shearwave_core::exact::{eval_asymptotic_linear, CarrollWave};
use shearwave_core::simulate::{
    evolve_asymptotic, evolve_full, evolve_scalar, evolve_temple, Trajectory, FULL_FIELDS,
    SCALAR_FIELDS, STRAIN_FIELDS, TEMPLE_FIELDS,
};
use shearwave_core::{Grid1D, StateGrid};

use super::{cell_averages, exact_error, simulate_error};
use crate::config::{InitialData, SimulateCmd, SystemConfig};
use crate::error::CliError;
use crate::output::{num, Artifacts};
use crate::Outcome;

/// Pointwise exact solution used to spot-check the final snapshot.
type Oracle = Box<dyn Fn(f64, f64) -> Vec<f64>>;

pub fn run(cmd: &SimulateCmd, out: &mut Artifacts) -> Result<Outcome, CliError> {
    let grid = cmd.grid.build()?;
    let names: &[&'static str] = match cmd.system {
        SystemConfig::Full { .. } => &FULL_FIELDS,
        SystemConfig::Asymptotic { .. } => &STRAIN_FIELDS,
        SystemConfig::Scalar { .. } => &SCALAR_FIELDS,
        SystemConfig::Temple { .. } => &TEMPLE_FIELDS,
    };
    let (init, oracle, end) = initial_state(cmd, &grid, names)?;
    let scheme = cmd.scheme.build(end)?;
    let traj = match &cmd.system {
        SystemConfig::Full { modulus } => evolve_full(&modulus.build()?, &init, &scheme),
        SystemConfig::Asymptotic { beta } => evolve_asymptotic(*beta, &init, &scheme),
        SystemConfig::Scalar { beta } => evolve_scalar(*beta, &init, &scheme),
        SystemConfig::Temple { flux } => evolve_temple(&flux.function(), &init, &scheme),
    }
    .map_err(simulate_error)?;
    write_snapshots(out, &traj, names)?;
    let last = traj.last();
    let oracle_error = oracle.map(|f| {
        let mut e = 0.0f64;
        for (i, x) in last.state.grid().centers().enumerate() {
            let exact = f(x, last.coord);
            for (k, name) in names.iter().enumerate() {
                e = e.max((last.state.field(name).unwrap()[i] - exact[k]).abs());
            }
        }
        e
    });
    let drift: Vec<Value> = init
        .means()
        .iter()
        .zip(last.state.means())
        .map(|(a, b)| num(b - a))
        .collect();
    Ok(Outcome {
        passed: true,
        summary: json!({
            "steps": traj.diagnostics.len(),
            "final_coord": num(last.coord),
            "snapshots": traj.snapshots.len(),
            "initial_max_gradient": num(traj.initial_max_gradient),
            "gradient_alarm": traj.gradient_alarm.map(num),
            "mean_drift": drift,
            "oracle_max_error": oracle_error.map(num),
        }),
    })
}

fn initial_state(
    cmd: &SimulateCmd,
    grid: &Grid1D,
    names: &[&'static str],
) -> Result<(StateGrid, Option<Oracle>, Option<f64>), CliError> {
    let mk = |values: Vec<Vec<f64>>| {
        StateGrid::new(*grid, names.to_vec(), values).map_err(|e| CliError::Config(e.to_string()))
    };
    let columns = |rows: Vec<Vec<f64>>| -> Vec<Vec<f64>> {
        (0..names.len())
            .map(|k| rows.iter().map(|r| r[k]).collect())
            .collect()
    };
    match (&cmd.system, &cmd.initial) {
        (
            SystemConfig::Full { modulus },
            InitialData::Carroll {
                amplitude,
                wavenumber,
                polarization,
                periods,
            },
        ) => {
            let m = modulus.build()?;
            let w = CarrollWave::new(&m, *amplitude, *wavenumber, (*polarization).into())
                .map_err(exact_error)?;
            let rows = cell_averages(grid, |x| {
                let s = w.eval_full(x, 0.0);
                [s.u, s.m, s.v, s.n]
            });
            let end = periods.map(|p| p * w.period());
            let oracle: Oracle = Box::new(move |x, t| {
                let s = w.eval_full(x, t);
                vec![s.u, s.m, s.v, s.n]
            });
            Ok((
                mk(columns(rows.iter().map(|r| r.to_vec()).collect()))?,
                Some(oracle),
                end,
            ))
        }
        (SystemConfig::Asymptotic { beta }, InitialData::ConstantModulus { amplitude, theta }) => {
            let (beta, a, th) = (*beta, *amplitude, theta.build());
            let rows = cell_averages(grid, |tau| {
                let s = eval_asymptotic_linear(beta, a, &th, 0.0, tau);
                [s.u, s.v]
            });
            let oracle: Oracle = Box::new(move |tau, x| {
                let s = eval_asymptotic_linear(beta, a, &th, x, tau);
                vec![s.u, s.v]
            });
            Ok((
                mk(columns(rows.iter().map(|r| r.to_vec()).collect()))?,
                Some(oracle),
                None,
            ))
        }
        (_, InitialData::Profiles(map)) => {
            if let Some(bad) = map.keys().find(|k| !names.contains(&k.as_str())) {
                return Err(CliError::Config(format!(
                    "unknown field {bad:?}; this system has {names:?}"
                )));
            }
            let profiles: Vec<_> = names
                .iter()
                .map(|n| map.get(*n).map(|p| p.build()))
                .collect();
            let rows = cell_averages(grid, |x| {
                let mut v = [0.0; 4];
                for (k, p) in profiles.iter().enumerate() {
                    v[k] = p.as_ref().map_or(0.0, |p| p.value(x));
                }
                v
            });
            Ok((
                mk(columns(rows.iter().map(|r| r.to_vec()).collect()))?,
                None,
                None,
            ))
        }
        _ => Err(CliError::Config(
            "initial data kind does not match the system".into(),
        )),
    }
}

fn write_snapshots(out: &mut Artifacts, traj: &Trajectory, names: &[&str]) -> Result<(), CliError> {
    let mut header = vec!["coord", "x"];
    header.extend_from_slice(names);
    let rows = traj.snapshots.iter().flat_map(|s| {
        let fields: Vec<&[f64]> = names.iter().map(|n| s.state.field(n).unwrap()).collect();
        s.state
            .grid()
            .centers()
            .enumerate()
            .map(move |(i, x)| {
                let mut row = vec![s.coord, x];
                row.extend(fields.iter().map(|f| f[i]));
                row
            })
            .collect::<Vec<_>>()
    });
    out.csv("snapshots.csv", &header, rows)?;
    let diag = traj
        .diagnostics
        .iter()
        .map(|d| [d.coord, d.dt, d.max_speed, d.max_gradient]);
    out.csv(
        "diagnostics.csv",
        &["coord", "step", "max_speed", "max_gradient"],
        diag,
    )
}
