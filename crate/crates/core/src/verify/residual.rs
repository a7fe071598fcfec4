use alloc::vec::Vec;

use super::VerifyError;
use crate::math;
use crate::state::{Axis, SampledField};

/// Decay order a residual must reach to pass.
pub const DEFAULT_TARGET: f64 = 1.8;

/// Residual norms on one refinement level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelNorms {
    /// Spacing along the spatial axis.
    pub h: f64,
    pub linf: f64,
    /// Root-mean-square over the interior points.
    pub l2: f64,
    /// Largest magnitude of the individual terms making up the residual.
    pub scale: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub levels: Vec<LevelNorms>,
    /// Least-squares slope of `log L∞` against `log h`; NaN when the
    /// residual is identically zero.
    pub order: f64,
    /// `L∞ ≤ 1e-10·scale` on every level.
    pub identically_zero: bool,
    pub target: f64,
    pub pass: bool,
}

impl ResidualReport {
    pub(crate) fn from_levels(levels: Vec<LevelNorms>, target: f64) -> Self {
        let identically_zero = levels.iter().all(|l| l.linf <= 1e-10 * l.scale);
        let order = if identically_zero {
            f64::NAN
        } else {
            let hs: Vec<f64> = levels.iter().map(|l| l.h).collect();
            let es: Vec<f64> = levels.iter().map(|l| l.linf).collect();
            super::convergence::fit_order(&hs, &es)
        };
        let pass = identically_zero || order >= target;
        Self {
            levels,
            order,
            identically_zero,
            target,
            pass,
        }
    }

    /// True when the residual clearly fails to decay (order ≤ 0.5).
    pub fn no_decay(&self) -> bool {
        !self.identically_zero && self.order <= 0.5
    }
}

fn close(a: f64, b: f64) -> bool {
    math::abs(a - b) <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

fn halves(coarse: Axis, fine: Axis) -> bool {
    close(coarse.start, fine.start)
        && close(0.5 * coarse.step, fine.step)
        && fine.len == 2 * (coarse.len - 1) + 1
}

pub(crate) fn check_levels(levels: &[SampledField]) -> Result<(), VerifyError> {
    if levels.len() < 2 {
        return Err(VerifyError::TooFewLevels {
            need: 2,
            got: levels.len(),
        });
    }
    for (i, f) in levels.iter().enumerate() {
        if f.rows().len < 5 {
            return Err(VerifyError::InsufficientSnapshots(f.rows().len));
        }
        if f.cols().len < 5 {
            return Err(VerifyError::InsufficientPoints(f.cols().len));
        }
        if i > 0 {
            let prev = &levels[i - 1];
            if !(halves(prev.rows(), f.rows()) && halves(prev.cols(), f.cols())) {
                return Err(VerifyError::NotNested { level: i });
            }
        }
    }
    Ok(())
}

/// Samples `f` on `count` nested levels starting from the given axes.
pub fn nested_levels<const K: usize, E>(
    rows: Axis,
    cols: Axis,
    count: usize,
    names: [&'static str; K],
    mut f: impl FnMut(f64, f64) -> Result<[f64; K], E>,
) -> Result<Vec<SampledField>, E> {
    let mut out = Vec::with_capacity(count);
    let (mut r, mut c) = (rows, cols);
    for _ in 0..count {
        out.push(SampledField::try_from_fn(r, c, names, &mut f)?);
        r = r.halved();
        c = c.halved();
    }
    Ok(out)
}

/// Read-only stencil access to one named field.
#[derive(Clone, Copy)]
pub(crate) struct Stencil<'a> {
    data: &'a [f64],
    cols: usize,
    hr: f64,
    hc: f64,
}

impl<'a> Stencil<'a> {
    pub(crate) fn new(field: &'a SampledField, name: &'static str) -> Result<Self, VerifyError> {
        let data = field.field(name).ok_or(VerifyError::MissingField(name))?;
        Ok(Self::from_slice(data, field))
    }

    pub(crate) fn from_slice(data: &'a [f64], field: &SampledField) -> Self {
        Self {
            data,
            cols: field.cols().len,
            hr: field.rows().step,
            hc: field.cols().step,
        }
    }

    #[inline]
    pub(crate) fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    /// Centered first difference along the evolution axis.
    #[inline]
    pub(crate) fn d_row(&self, r: usize, c: usize) -> f64 {
        (self.at(r + 1, c) - self.at(r - 1, c)) / (2.0 * self.hr)
    }

    /// Centered first difference along the spatial axis.
    #[inline]
    pub(crate) fn d_col(&self, r: usize, c: usize) -> f64 {
        (self.at(r, c + 1) - self.at(r, c - 1)) / (2.0 * self.hc)
    }

    #[inline]
    pub(crate) fn dd_row(&self, r: usize, c: usize) -> f64 {
        (self.at(r + 1, c) - 2.0 * self.at(r, c) + self.at(r - 1, c)) / (self.hr * self.hr)
    }

    #[inline]
    pub(crate) fn dd_col(&self, r: usize, c: usize) -> f64 {
        (self.at(r, c + 1) - 2.0 * self.at(r, c) + self.at(r, c - 1)) / (self.hc * self.hc)
    }
}

/// Accumulates residual samples on one level.
#[derive(Default)]
pub(crate) struct Accumulator {
    linf: f64,
    sum_sq: f64,
    count: usize,
    scale: f64,
}

impl Accumulator {
    /// Records one residual value formed from terms of the given sizes.
    #[inline]
    pub(crate) fn push(&mut self, residual: f64, terms: &[f64]) {
        let a = math::abs(residual);
        self.linf = if a.is_nan() {
            f64::INFINITY
        } else {
            self.linf.max(a)
        };
        self.sum_sq += residual * residual;
        self.count += 1;
        for t in terms {
            self.scale = self.scale.max(math::abs(*t));
        }
    }

    pub(crate) fn finish(self, h: f64) -> LevelNorms {
        let l2 = if self.count == 0 {
            0.0
        } else {
            math::sqrt(self.sum_sq / self.count as f64)
        };
        LevelNorms {
            h,
            linf: self.linf,
            l2,
            scale: self.scale,
        }
    }
}

/// Interior index range with two boundary layers dropped.
pub(crate) fn interior(len: usize) -> core::ops::Range<usize> {
    2..len - 2
}

/// Runs `level` on every field after checking the nesting.
pub(crate) fn study(
    levels: &[SampledField],
    target: f64,
    mut level: impl FnMut(&SampledField) -> Result<LevelNorms, VerifyError>,
) -> Result<ResidualReport, VerifyError> {
    check_levels(levels)?;
    let norms = levels
        .iter()
        .map(&mut level)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ResidualReport::from_levels(norms, target))
}
