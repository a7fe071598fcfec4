//! Conservative finite-volume kernels for `q_t + f(q)_x = 0`.

use alloc::vec;
use alloc::vec::Vec;

use super::SimulateError;
use crate::math;
use crate::state::Boundary;

/// A system of `N` conservation laws `q_t + f(q)_x = 0`.
pub(crate) trait ConservationLaw<const N: usize> {
    fn flux(&self, q: &[f64; N]) -> [f64; N];

    /// Bound on the characteristic speeds at `q`; errors when the system
    /// is not hyperbolic there.
    fn max_speed(&self, q: &[f64; N]) -> Result<f64, SimulateError>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    /// First-order local Lax–Friedrichs (Rusanov) flux.
    #[default]
    LaxFriedrichs,
    /// MUSCL-Hancock with minmod-limited slopes and the Rusanov flux.
    MusclMinmod,
}

impl Scheme {
    /// Formal order on smooth solutions.
    pub fn order(&self) -> f64 {
        match self {
            Scheme::LaxFriedrichs => 1.0,
            Scheme::MusclMinmod => 2.0,
        }
    }
}

#[inline]
fn minmod(a: f64, b: f64) -> f64 {
    if a * b <= 0.0 {
        0.0
    } else if math::abs(a) < math::abs(b) {
        a
    } else {
        b
    }
}

/// Work buffers for one run, sized for `n` cells and two ghost layers.
pub(crate) struct Stepper<const N: usize> {
    n: usize,
    boundary: Boundary,
    ext: Vec<[f64; N]>,
    left: Vec<[f64; N]>,
    right: Vec<[f64; N]>,
    iface: Vec<[f64; N]>,
}

const GHOST: usize = 2;

impl<const N: usize> Stepper<N> {
    pub(crate) fn new(n: usize, boundary: Boundary) -> Self {
        let m = n + 2 * GHOST;
        Self {
            n,
            boundary,
            ext: vec![[0.0; N]; m],
            left: vec![[0.0; N]; m],
            right: vec![[0.0; N]; m],
            iface: vec![[0.0; N]; n + 1],
        }
    }

    fn fill_ghosts(&mut self, q: &[[f64; N]]) {
        let n = self.n;
        self.ext[GHOST..GHOST + n].copy_from_slice(q);
        for g in 0..GHOST {
            let (lo, hi) = match self.boundary {
                Boundary::Periodic => (q[n - GHOST + g], q[g]),
                Boundary::Outflow => (q[0], q[n - 1]),
            };
            self.ext[g] = lo;
            self.ext[GHOST + n + g] = hi;
        }
    }

    fn rusanov<L: ConservationLaw<N>>(
        law: &L,
        a: &[f64; N],
        b: &[f64; N],
    ) -> Result<[f64; N], SimulateError> {
        let fa = law.flux(a);
        let fb = law.flux(b);
        let s = law.max_speed(a)?.max(law.max_speed(b)?);
        let mut out = [0.0; N];
        for k in 0..N {
            out[k] = 0.5 * (fa[k] + fb[k]) - 0.5 * s * (b[k] - a[k]);
        }
        Ok(out)
    }

    /// Advances `q` by `dt` in place.
    pub(crate) fn step<L: ConservationLaw<N>>(
        &mut self,
        law: &L,
        scheme: Scheme,
        q: &mut [[f64; N]],
        dt: f64,
        h: f64,
    ) -> Result<(), SimulateError> {
        let n = self.n;
        self.fill_ghosts(q);
        match scheme {
            Scheme::LaxFriedrichs => {
                for j in 0..=n {
                    // interface between ext[GHOST + j - 1] and ext[GHOST + j]
                    let a = self.ext[GHOST + j - 1];
                    let b = self.ext[GHOST + j];
                    self.iface[j] = Self::rusanov(law, &a, &b)?;
                }
            }
            Scheme::MusclMinmod => {
                let half = 0.5 * dt / h;
                for i in 1..n + 2 * GHOST - 1 {
                    let (qm, q0, qp) = (self.ext[i - 1], self.ext[i], self.ext[i + 1]);
                    let mut l = [0.0; N];
                    let mut r = [0.0; N];
                    for k in 0..N {
                        let s = minmod(q0[k] - qm[k], qp[k] - q0[k]);
                        l[k] = q0[k] - 0.5 * s;
                        r[k] = q0[k] + 0.5 * s;
                    }
                    let fl = law.flux(&l);
                    let fr = law.flux(&r);
                    for k in 0..N {
                        let df = half * (fr[k] - fl[k]);
                        l[k] -= df;
                        r[k] -= df;
                    }
                    self.left[i] = l;
                    self.right[i] = r;
                }
                for j in 0..=n {
                    let a = self.right[GHOST + j - 1];
                    let b = self.left[GHOST + j];
                    self.iface[j] = Self::rusanov(law, &a, &b)?;
                }
            }
        }
        let r = dt / h;
        for (i, qi) in q.iter_mut().enumerate() {
            let (lo, hi) = (&self.iface[i], &self.iface[i + 1]);
            for (k, v) in qi.iter_mut().enumerate() {
                *v -= r * (hi[k] - lo[k]);
            }
        }
        Ok(())
    }
}

/// Largest one-sided difference quotient over all fields.
pub(crate) fn max_gradient<const N: usize>(q: &[[f64; N]], h: f64, boundary: Boundary) -> f64 {
    let n = q.len();
    let pairs = match boundary {
        Boundary::Periodic => n,
        Boundary::Outflow => n - 1,
    };
    let mut g: f64 = 0.0;
    for i in 0..pairs {
        let j = (i + 1) % n;
        for (a, b) in q[i].iter().zip(&q[j]) {
            g = g.max(math::abs(b - a));
        }
    }
    g / h
}

pub(crate) fn total_variation<const N: usize>(q: &[[f64; N]], boundary: Boundary) -> [f64; N] {
    let n = q.len();
    let pairs = match boundary {
        Boundary::Periodic => n,
        Boundary::Outflow => n - 1,
    };
    let mut tv = [0.0; N];
    for i in 0..pairs {
        let j = (i + 1) % n;
        for k in 0..N {
            tv[k] += math::abs(q[j][k] - q[i][k]);
        }
    }
    tv
}
