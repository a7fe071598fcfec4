use rayon::prelude::*;
use serde_json::json;
use shearwave_core::analysis::{classify as classify_flux, temple_eigen, Flag};
use shearwave_core::exact::{hodograph_forward, hodograph_jacobian, HodographData};
use shearwave_core::Bivariate;

use crate::config::{ClassifyCmd, HodographCmd};
use crate::error::CliError;
use crate::output::{num, Artifacts};
use crate::Outcome;

fn flag_json(f: &Flag) -> serde_json::Value {
    json!({
        "state": f.state.as_str(),
        "residual": num(f.residual),
        "samples_used": f.samples_used,
    })
}

pub fn classify(cmd: &ClassifyCmd, out: &mut Artifacts) -> Result<Outcome, CliError> {
    let (ua, va) = (cmd.u.build()?, cmd.v.build()?);
    let samples: Vec<(f64, f64)> = (0..ua.len)
        .flat_map(|i| (0..va.len).map(move |j| (ua.coord(i), va.coord(j))))
        .collect();
    let flux = cmd.flux.build();
    let chart = cmd.chart.as_ref().map(|c| c.function());
    let report = classify_flux(&flux, &samples, chart.as_ref()).map_err(CliError::solver)?;

    let rows: Vec<[f64; 8]> = samples
        .par_iter()
        .map(|&(u, v)| match temple_eigen(&flux, u, v) {
            Ok(r) => [u, v, r.lambda1, r.lambda2, r.ld1, r.ld2, r.d2[0], r.d2[1]],
            Err(_) => [
                u,
                v,
                f64::NAN,
                f64::NAN,
                f64::NAN,
                f64::NAN,
                f64::NAN,
                f64::NAN,
            ],
        })
        .collect();
    out.csv(
        "eigen.csv",
        &[
            "u",
            "v",
            "lambda1",
            "lambda2",
            "grad_l1_d1",
            "grad_l2_d2",
            "d2_u",
            "d2_v",
        ],
        &rows,
    )?;

    let values: Vec<f64> = samples
        .iter()
        .map(|&(u, v)| flux.function().value(u, v))
        .collect();
    let p0 = values[0];
    let constant = values
        .iter()
        .all(|p| (p - p0).abs() <= 1e-12 * p0.abs().max(1.0));
    let summary = json!({
        "samples": samples.len(),
        "constant_flux": constant,
        "equal_eigenvalues": flag_json(&report.equal_eigenvalues),
        "completely_exceptional": flag_json(&report.completely_exceptional),
        "hamiltonian": flag_json(&report.hamiltonian),
        "decouples": flag_json(&report.decouples),
        "user_chart": report.user_chart,
    });
    out.json("classification.json", &summary)?;
    Ok(Outcome {
        passed: true,
        summary,
    })
}

pub fn hodograph(cmd: &HodographCmd, out: &mut Artifacts) -> Result<Outcome, CliError> {
    let (ta, ra) = (cmd.theta.build()?, cmd.rho.build()?);
    let data = HodographData::new(cmd.s3.build(), cmd.s4.build());
    let nodes: Vec<(f64, f64)> = (0..ta.len)
        .flat_map(|i| (0..ra.len).map(move |j| (ta.coord(i), ra.coord(j))))
        .collect();
    let rows = nodes
        .par_iter()
        .map(|&(theta, rho)| {
            let (x, tau) = hodograph_forward(&data, cmd.beta, theta, rho)?;
            let [[a, b], [c, d]] = hodograph_jacobian(&data, cmd.beta, theta, rho)?;
            Ok([theta, rho, x, tau, a * d - b * c])
        })
        .collect::<Result<Vec<[f64; 5]>, _>>()
        .map_err(super::exact_error)?;
    out.csv(
        "hodograph.csv",
        &["theta", "rho", "X", "tau", "jacobian"],
        &rows,
    )?;
    let dets: Vec<f64> = rows.iter().map(|r| r[4]).collect();
    let positive = dets.iter().filter(|d| **d > 0.0).count();
    let negative = dets.iter().filter(|d| **d < 0.0).count();
    let min_abs = dets.iter().map(|d| d.abs()).fold(f64::INFINITY, f64::min);
    Ok(Outcome {
        passed: true,
        summary: json!({
            "nodes": rows.len(),
            "fold_free": positive == dets.len() || negative == dets.len(),
            "positive_jacobian": positive,
            "negative_jacobian": negative,
            "min_abs_jacobian": num(min_abs),
        }),
    })
}
