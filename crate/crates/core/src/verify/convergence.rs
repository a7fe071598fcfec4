use alloc::vec::Vec;

use super::VerifyError;
use crate::math;
use crate::state::{Grid1D, StateGrid};

/// Least-squares slope of `log e` against `log h`. Zero errors are clamped
/// to the smallest positive double so the fit stays finite.
pub fn fit_order(hs: &[f64], errs: &[f64]) -> f64 {
    let n = hs.len().min(errs.len());
    if n < 2 {
        return f64::NAN;
    }
    let pts: Vec<(f64, f64)> = hs
        .iter()
        .zip(errs)
        .map(|(&h, &e)| (math::ln(h), math::ln(e.max(f64::MIN_POSITIVE))))
        .collect();
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n as f64;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n as f64;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in &pts {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}

/// Averages groups of `fine.len() / coarse_cells` consecutive cells.
pub fn restrict_average(fine: &[f64], coarse_cells: usize) -> Result<Vec<f64>, VerifyError> {
    if coarse_cells == 0 || !fine.len().is_multiple_of(coarse_cells) {
        return Err(VerifyError::Other(alloc::format!(
            "cannot restrict {} cells onto {}",
            fine.len(),
            coarse_cells
        )));
    }
    let r = fine.len() / coarse_cells;
    Ok(fine
        .chunks(r)
        .map(|c| c.iter().sum::<f64>() / r as f64)
        .collect())
}

/// What each run is compared against.
pub enum Reference<'a> {
    /// Pointwise exact solution returning one value per compared field;
    /// cell averages are formed by three-point Gauss quadrature.
    Exact(&'a dyn Fn(f64) -> Vec<f64>),
    /// The finest run, restricted onto each coarser grid.
    SelfFinest,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceLevel {
    pub n: usize,
    pub h: f64,
    pub linf: f64,
    /// `h Σ |e|`
    pub l1: f64,
    /// `sqrt(h Σ e²)`
    pub l2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub levels: Vec<ConvergenceLevel>,
    pub order_linf: f64,
    pub order_l1: f64,
    pub order_l2: f64,
    /// `log2(e_k / e_{k+1}) / log2(h_k / h_{k+1})` between consecutive
    /// levels, in L∞.
    pub pairwise: Vec<f64>,
}

fn gauss_average(exact: &dyn Fn(f64) -> Vec<f64>, a: f64, b: f64, k: usize) -> Vec<f64> {
    let m = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let g = math::sqrt(0.6);
    let (lo, mid, hi) = (exact(m - g * r), exact(m), exact(m + g * r));
    (0..k)
        .map(|i| (5.0 * lo[i] + 8.0 * mid[i] + 5.0 * hi[i]) / 18.0)
        .collect()
}

fn level_errors(
    grid: &Grid1D,
    state: &StateGrid,
    fields: &[&'static str],
    reference: &dyn Fn(usize, usize) -> f64,
) -> Result<ConvergenceLevel, VerifyError> {
    let h = grid.spacing();
    let (mut linf, mut sum, mut sq) = (0.0f64, 0.0, 0.0);
    for (k, name) in fields.iter().enumerate() {
        let data = state.field(name).ok_or(VerifyError::MissingField(name))?;
        for (i, v) in data.iter().enumerate() {
            let e = v - reference(k, i);
            linf = linf.max(if e.is_nan() {
                f64::INFINITY
            } else {
                math::abs(e)
            });
            sum += math::abs(e);
            sq += e * e;
        }
    }
    Ok(ConvergenceLevel {
        n: grid.cells(),
        h,
        linf,
        l1: h * sum,
        l2: math::sqrt(h * sq),
    })
}

/// Runs a solver on each grid (coarse to fine) and fits convergence orders
/// of the named fields against `reference`.
pub fn convergence_study(
    grids: &[Grid1D],
    fields: &[&'static str],
    mut run: impl FnMut(&Grid1D) -> Result<StateGrid, VerifyError>,
    reference: Reference<'_>,
) -> Result<ConvergenceReport, VerifyError> {
    let need = match reference {
        Reference::Exact(_) => 2,
        Reference::SelfFinest => 3,
    };
    if grids.len() < need {
        return Err(VerifyError::TooFewLevels {
            need,
            got: grids.len(),
        });
    }
    let states = grids.iter().map(&mut run).collect::<Result<Vec<_>, _>>()?;
    let mut levels = Vec::with_capacity(grids.len());
    match reference {
        Reference::Exact(exact) => {
            for (g, s) in grids.iter().zip(&states) {
                let avgs: Vec<Vec<f64>> = (0..g.cells())
                    .map(|i| {
                        let c = g.center(i);
                        let h = g.spacing();
                        gauss_average(exact, c - 0.5 * h, c + 0.5 * h, fields.len())
                    })
                    .collect();
                levels.push(level_errors(g, s, fields, &|k, i| avgs[i][k])?);
            }
        }
        Reference::SelfFinest => {
            let finest = states.last().expect("at least three grids");
            let restricted_to = |n: usize| -> Result<Vec<Vec<f64>>, VerifyError> {
                fields
                    .iter()
                    .map(|name| {
                        let f = finest.field(name).ok_or(VerifyError::MissingField(name))?;
                        restrict_average(f, n)
                    })
                    .collect()
            };
            for (g, s) in grids.iter().zip(&states).take(grids.len() - 1) {
                let reference = restricted_to(g.cells())?;
                levels.push(level_errors(g, s, fields, &|k, i| reference[k][i])?);
            }
        }
    }
    let hs: Vec<f64> = levels.iter().map(|l| l.h).collect();
    let linf: Vec<f64> = levels.iter().map(|l| l.linf).collect();
    let l1: Vec<f64> = levels.iter().map(|l| l.l1).collect();
    let l2: Vec<f64> = levels.iter().map(|l| l.l2).collect();
    let pairwise = levels
        .windows(2)
        .map(|w| {
            math::ln(w[0].linf.max(f64::MIN_POSITIVE) / w[1].linf.max(f64::MIN_POSITIVE))
                / math::ln(w[0].h / w[1].h)
        })
        .collect();
    Ok(ConvergenceReport {
        order_linf: fit_order(&hs, &linf),
        order_l1: fit_order(&hs, &l1),
        order_l2: fit_order(&hs, &l2),
        levels,
        pairwise,
    })
}
