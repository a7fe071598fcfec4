//! Point states, the 1D finite-volume grid, and sampled space-time fields.

use alloc::vec::Vec;
use thiserror::Error;

use crate::math;

/// Strain pair `(U, V) = (u_x, v_x)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StrainState {
    pub u: f64,
    pub v: f64,
}

impl StrainState {
    pub fn new(u: f64, v: f64) -> Self {
        Self { u, v }
    }

    pub fn amplitude_sq(&self) -> f64 {
        self.u * self.u + self.v * self.v
    }

    pub fn to_polar(self) -> PolarState {
        PolarState {
            rho: math::hypot(self.u, self.v),
            theta: math::atan2(self.v, self.u),
        }
    }
}

/// Modulus and argument of `W = U + iV`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PolarState {
    pub rho: f64,
    pub theta: f64,
}

impl PolarState {
    pub fn new(rho: f64, theta: f64) -> Self {
        Self { rho, theta }
    }

    pub fn to_strain(self) -> StrainState {
        StrainState {
            u: self.rho * math::cos(self.theta),
            v: self.rho * math::sin(self.theta),
        }
    }
}

/// Strains and velocities `(U, M, V, N)` of the first-order elastic system.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FullState {
    pub u: f64,
    pub m: f64,
    pub v: f64,
    pub n: f64,
}

impl FullState {
    pub fn strain(&self) -> StrainState {
        StrainState {
            u: self.u,
            v: self.v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    #[default]
    Periodic,
    Outflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum GridError {
    #[error("a grid needs at least 8 cells, got {0}")]
    TooFewCells(usize),
    #[error("domain [{a}, {b}] is empty or not finite")]
    EmptyDomain { a: f64, b: f64 },
    #[error("field {name} has {got} values, grid has {expected} cells")]
    LengthMismatch {
        name: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("axis needs a positive step and at least 3 points")]
    BadAxis,
}

/// Uniform cell-centered grid on `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    n: usize,
    a: f64,
    b: f64,
    boundary: Boundary,
}

impl Grid1D {
    pub fn new(n: usize, a: f64, b: f64, boundary: Boundary) -> Result<Self, GridError> {
        if n < 8 {
            return Err(GridError::TooFewCells(n));
        }
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(GridError::EmptyDomain { a, b });
        }
        Ok(Self { n, a, b, boundary })
    }

    pub fn periodic(n: usize, a: f64, b: f64) -> Result<Self, GridError> {
        Self::new(n, a, b, Boundary::Periodic)
    }

    pub fn cells(&self) -> usize {
        self.n
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn spacing(&self) -> f64 {
        (self.b - self.a) / self.n as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        self.a + (i as f64 + 0.5) * self.spacing()
    }

    pub fn centers(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.center(i))
    }

    /// Same domain and boundary with `factor` times as many cells.
    pub fn refined(&self, factor: usize) -> Result<Self, GridError> {
        Self::new(self.n * factor, self.a, self.b, self.boundary)
    }
}

/// Named cell-average fields on a [`Grid1D`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateGrid {
    grid: Grid1D,
    names: Vec<&'static str>,
    fields: Vec<Vec<f64>>,
}

impl StateGrid {
    pub fn new(
        grid: Grid1D,
        names: Vec<&'static str>,
        fields: Vec<Vec<f64>>,
    ) -> Result<Self, GridError> {
        for (name, f) in names.iter().zip(&fields) {
            if f.len() != grid.cells() {
                return Err(GridError::LengthMismatch {
                    name,
                    got: f.len(),
                    expected: grid.cells(),
                });
            }
        }
        Ok(Self {
            grid,
            names,
            fields,
        })
    }

    /// Samples `f` at every cell center.
    pub fn from_fn<const K: usize>(
        grid: Grid1D,
        names: [&'static str; K],
        mut f: impl FnMut(f64) -> [f64; K],
    ) -> Self {
        let mut fields: Vec<Vec<f64>> = (0..K).map(|_| Vec::with_capacity(grid.cells())).collect();
        for x in grid.centers() {
            let vals = f(x);
            for (k, v) in vals.iter().enumerate() {
                fields[k].push(*v);
            }
        }
        Self {
            grid,
            names: names.to_vec(),
            fields,
        }
    }

    pub fn try_from_fn<const K: usize, E>(
        grid: Grid1D,
        names: [&'static str; K],
        mut f: impl FnMut(f64) -> Result<[f64; K], E>,
    ) -> Result<Self, E> {
        let mut fields: Vec<Vec<f64>> = (0..K).map(|_| Vec::with_capacity(grid.cells())).collect();
        for x in grid.centers() {
            let vals = f(x)?;
            for (k, v) in vals.iter().enumerate() {
                fields[k].push(*v);
            }
        }
        Ok(Self {
            grid,
            names: names.to_vec(),
            fields,
        })
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn names(&self) -> &[&'static str] {
        &self.names
    }

    pub fn field(&self, name: &str) -> Option<&[f64]> {
        self.names
            .iter()
            .position(|n| *n == name)
            .map(|i| self.fields[i].as_slice())
    }

    pub fn fields(&self) -> &[Vec<f64>] {
        &self.fields
    }

    /// Cell average of every field.
    pub fn means(&self) -> Vec<f64> {
        self.fields
            .iter()
            .map(|f| f.iter().sum::<f64>() / f.len() as f64)
            .collect()
    }
}

/// Uniformly spaced coordinate axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl Axis {
    pub fn new(start: f64, step: f64, len: usize) -> Result<Self, GridError> {
        if !(step > 0.0 && step.is_finite() && start.is_finite()) || len < 3 {
            return Err(GridError::BadAxis);
        }
        Ok(Self { start, step, len })
    }

    /// `len` points spanning `[start, end]` inclusive.
    pub fn spanning(start: f64, end: f64, len: usize) -> Result<Self, GridError> {
        if len < 3 {
            return Err(GridError::BadAxis);
        }
        Self::new(start, (end - start) / (len - 1) as f64, len)
    }

    pub fn coord(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn end(&self) -> f64 {
        self.coord(self.len - 1)
    }

    /// Same span with twice the resolution.
    pub fn halved(&self) -> Self {
        Self {
            start: self.start,
            step: 0.5 * self.step,
            len: 2 * (self.len - 1) + 1,
        }
    }
}

/// Named fields sampled on a tensor grid. Rows follow the evolution
/// coordinate (`t` or `X`), columns the spatial one (`x` or `τ`).
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    rows: Axis,
    cols: Axis,
    names: Vec<&'static str>,
    data: Vec<Vec<f64>>,
}

impl SampledField {
    pub fn from_fn<const K: usize>(
        rows: Axis,
        cols: Axis,
        names: [&'static str; K],
        mut f: impl FnMut(f64, f64) -> [f64; K],
    ) -> Self {
        let n = rows.len * cols.len;
        let mut data: Vec<Vec<f64>> = (0..K).map(|_| Vec::with_capacity(n)).collect();
        for r in 0..rows.len {
            let y = rows.coord(r);
            for c in 0..cols.len {
                let vals = f(y, cols.coord(c));
                for (k, v) in vals.iter().enumerate() {
                    data[k].push(*v);
                }
            }
        }
        Self {
            rows,
            cols,
            names: names.to_vec(),
            data,
        }
    }

    pub fn try_from_fn<const K: usize, E>(
        rows: Axis,
        cols: Axis,
        names: [&'static str; K],
        mut f: impl FnMut(f64, f64) -> Result<[f64; K], E>,
    ) -> Result<Self, E> {
        let n = rows.len * cols.len;
        let mut data: Vec<Vec<f64>> = (0..K).map(|_| Vec::with_capacity(n)).collect();
        for r in 0..rows.len {
            let y = rows.coord(r);
            for c in 0..cols.len {
                let vals = f(y, cols.coord(c))?;
                for (k, v) in vals.iter().enumerate() {
                    data[k].push(*v);
                }
            }
        }
        Ok(Self {
            rows,
            cols,
            names: names.to_vec(),
            data,
        })
    }

    /// Builds a field from column-major producers: `column(c)` returns the
    /// values of every field along the whole row axis at column `c`.
    pub fn from_columns<const K: usize, E>(
        rows: Axis,
        cols: Axis,
        names: [&'static str; K],
        mut column: impl FnMut(f64) -> Result<[Vec<f64>; K], E>,
    ) -> Result<Self, E> {
        let n = rows.len * cols.len;
        let mut data: Vec<Vec<f64>> = (0..K).map(|_| alloc::vec![0.0; n]).collect();
        for c in 0..cols.len {
            let vals = column(cols.coord(c))?;
            for (k, col) in vals.iter().enumerate() {
                for (r, v) in col.iter().enumerate().take(rows.len) {
                    data[k][r * cols.len + c] = *v;
                }
            }
        }
        Ok(Self {
            rows,
            cols,
            names: names.to_vec(),
            data,
        })
    }

    pub fn with_field(mut self, name: &'static str, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), self.rows.len * self.cols.len);
        if let Some(i) = self.names.iter().position(|n| *n == name) {
            self.data[i] = values;
        } else {
            self.names.push(name);
            self.data.push(values);
        }
        self
    }

    pub fn rows(&self) -> Axis {
        self.rows
    }

    pub fn cols(&self) -> Axis {
        self.cols
    }

    pub fn names(&self) -> &[&'static str] {
        &self.names
    }

    pub fn field(&self, name: &str) -> Option<&[f64]> {
        self.names
            .iter()
            .position(|n| *n == name)
            .map(|i| self.data[i].as_slice())
    }

    #[inline]
    pub fn index(&self, r: usize, c: usize) -> usize {
        r * self.cols.len + c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polar_round_trip() {
        let p = PolarState::new(1.7, 2.3);
        let back = p.to_strain().to_polar();
        assert!((back.rho - p.rho).abs() < 1e-14);
        assert!((back.theta - p.theta).abs() < 1e-14);
    }

    #[test]
    fn grid_validation() {
        assert_eq!(
            Grid1D::periodic(7, 0.0, 1.0),
            Err(GridError::TooFewCells(7))
        );
        assert!(Grid1D::periodic(8, 1.0, 1.0).is_err());
        let g = Grid1D::periodic(10, 0.0, 1.0).unwrap();
        assert!((g.spacing() - 0.1).abs() < 1e-15);
        assert!((g.center(0) - 0.05).abs() < 1e-15);
    }

    #[test]
    fn axis_halving_is_nested() {
        let a = Axis::spanning(0.0, 1.0, 11).unwrap();
        let b = a.halved();
        assert_eq!(b.len, 21);
        assert!((b.end() - 1.0).abs() < 1e-15);
        assert!((b.coord(2) - a.coord(1)).abs() < 1e-15);
    }
}
