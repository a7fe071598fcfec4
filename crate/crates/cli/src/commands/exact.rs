use serde_json::{json, Value};
use shearwave_core::verify::{residual_asymptotic, residual_full, residual_temple, ResidualReport};

use super::fields::{levels, Family};
use super::residual_json;
use crate::config::{ExactCmd, ExactSolution};
use crate::error::CliError;
use crate::output::Artifacts;
use crate::Outcome;

pub fn run(cmd: &ExactCmd, out: &mut Artifacts) -> Result<Outcome, CliError> {
    let (rows, cols) = (cmd.rows.build()?, cmd.cols.build()?);
    let field = cmd.solution.sample(rows, cols)?;
    let (rl, cl) = cmd.solution.labels();
    out.field_csv("exact.csv", rl, cl, &field)?;
    let mut summary = json!({
        "rows": rows.len,
        "cols": cols.len,
        "fields": field.names(),
    });
    let mut passed = true;
    if cmd.self_check {
        if cmd.levels < 2 {
            return Err(CliError::Config(
                "self_check needs at least 2 levels".into(),
            ));
        }
        let report = self_check(&cmd.solution, rows, cols, cmd.levels)?;
        passed = report.pass;
        summary["self_check"] = residual_json(&report);
    }
    Ok(Outcome { passed, summary })
}

fn self_check(
    sol: &ExactSolution,
    rows: shearwave_core::Axis,
    cols: shearwave_core::Axis,
    count: usize,
) -> Result<ResidualReport, CliError> {
    let fields = levels(rows, cols, count, |r, c| sol.sample(r, c))?;
    let report = match (sol.family(), sol) {
        (Family::Full, ExactSolution::Carroll { modulus, .. })
        | (Family::Full, ExactSolution::GeneralizedCarroll { modulus, .. }) => {
            residual_full(&fields, &modulus.build()?)
        }
        (Family::Asymptotic, ExactSolution::ConstantModulus { beta, .. })
        | (Family::Asymptotic, ExactSolution::SimpleWave { beta, .. })
        | (Family::Asymptotic, ExactSolution::Hodograph { beta, .. }) => {
            residual_asymptotic(&fields, *beta)
        }
        (Family::Temple, ExactSolution::Overdetermined { flux, .. })
        | (Family::Temple, ExactSolution::Separable { flux, .. }) => {
            residual_temple(&fields, &flux.build())
        }
        _ => unreachable!("family() agrees with the variant"),
    };
    report.map_err(|e| CliError::Solver {
        message: e.to_string(),
        locus: None::<Value>,
    })
}
