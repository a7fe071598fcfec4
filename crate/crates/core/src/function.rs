//! Scalar building blocks: univariate profiles (F, Θ, Φ, s3, s4, Q, ...)
//! and bivariate functions of the strain pair (P, α, φ, ...).
//!
//! Every builtin carries analytic first and second derivatives. Closures
//! supplied by callers fall back to central differences with step
//! `h = 1e-6·max(1, |s|)` when no derivative is given.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::math;

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type PairFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
type PairGradFn = Arc<dyn Fn(f64, f64) -> [f64; 2] + Send + Sync>;

/// A smooth function of one variable with derivative services.
#[derive(Clone)]
pub enum ProfileFunction {
    /// `c`
    Const(f64),
    /// `k·ξ`
    Linear { k: f64 },
    /// `amp·sin(freq·ξ) + offset`
    Sine { amp: f64, freq: f64, offset: f64 },
    /// `Σ cᵢ ξⁱ`
    Poly(Vec<f64>),
    /// `scale·(ξ + shift)^exponent`, defined for `ξ + shift > 0`.
    Power {
        scale: f64,
        shift: f64,
        exponent: f64,
    },
    /// Caller-supplied closure with an optional analytic derivative.
    Custom { f: ScalarFn, df: Option<ScalarFn> },
}

impl fmt::Debug for ProfileFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Const(c) => write!(f, "Const({c})"),
            Self::Linear { k } => write!(f, "Linear {{ k: {k} }}"),
            Self::Sine { amp, freq, offset } => {
                write!(f, "Sine {{ amp: {amp}, freq: {freq}, offset: {offset} }}")
            }
            Self::Poly(c) => write!(f, "Poly({c:?})"),
            Self::Power {
                scale,
                shift,
                exponent,
            } => write!(
                f,
                "Power {{ scale: {scale}, shift: {shift}, exponent: {exponent} }}"
            ),
            Self::Custom { df, .. } => {
                write!(f, "Custom {{ analytic_derivative: {} }}", df.is_some())
            }
        }
    }
}

impl ProfileFunction {
    pub fn custom(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::Custom {
            f: Arc::new(f),
            df: None,
        }
    }

    pub fn custom_with_derivative(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        df: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self::Custom {
            f: Arc::new(f),
            df: Some(Arc::new(df)),
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        match self {
            Self::Const(c) => *c,
            Self::Linear { k } => k * x,
            Self::Sine { amp, freq, offset } => amp * math::sin(freq * x) + offset,
            Self::Poly(c) => horner(c, x),
            Self::Power {
                scale,
                shift,
                exponent,
            } => scale * math::powf(x + shift, *exponent),
            Self::Custom { f, .. } => f(x),
        }
    }

    /// First derivative.
    pub fn d1(&self, x: f64) -> f64 {
        match self {
            Self::Const(_) => 0.0,
            Self::Linear { k } => *k,
            Self::Sine { amp, freq, .. } => amp * freq * math::cos(freq * x),
            Self::Poly(c) => poly_derivative(c, x, 1),
            Self::Power {
                scale,
                shift,
                exponent,
            } => scale * exponent * math::powf(x + shift, exponent - 1.0),
            Self::Custom { f, df } => match df {
                Some(df) => df(x),
                None => {
                    let h = math::fd_step(x);
                    (f(x + h) - f(x - h)) / (2.0 * h)
                }
            },
        }
    }

    /// Second derivative.
    pub fn d2(&self, x: f64) -> f64 {
        match self {
            Self::Const(_) | Self::Linear { .. } => 0.0,
            Self::Sine { amp, freq, .. } => -amp * freq * freq * math::sin(freq * x),
            Self::Poly(c) => poly_derivative(c, x, 2),
            Self::Power {
                scale,
                shift,
                exponent,
            } => scale * exponent * (exponent - 1.0) * math::powf(x + shift, exponent - 2.0),
            Self::Custom { f, df } => match df {
                Some(df) => {
                    let h = math::fd_step(x);
                    (df(x + h) - df(x - h)) / (2.0 * h)
                }
                None => {
                    let h = 1e-4
                        * if math::abs(x) > 1.0 {
                            math::abs(x)
                        } else {
                            1.0
                        };
                    (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
                }
            },
        }
    }

    /// True when the function is the same constant everywhere.
    pub fn is_constant(&self) -> bool {
        match self {
            Self::Const(_) => true,
            Self::Linear { k } => *k == 0.0,
            Self::Sine { amp, freq, .. } => *amp == 0.0 || *freq == 0.0,
            Self::Poly(c) => c.iter().skip(1).all(|&ci| ci == 0.0),
            Self::Power {
                scale, exponent, ..
            } => *scale == 0.0 || *exponent == 0.0,
            Self::Custom { .. } => false,
        }
    }
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

fn poly_derivative(c: &[f64], x: f64, order: usize) -> f64 {
    let mut acc = 0.0;
    for (i, &ci) in c.iter().enumerate().skip(order).rev() {
        let mut falling = 1.0;
        for j in 0..order {
            falling *= (i - j) as f64;
        }
        acc = acc * x + ci * falling;
    }
    acc
}

/// A function of the pair `(u, v)` with gradient and Hessian.
///
/// The default derivative implementations are central differences;
/// analytic implementations override them.
pub trait Bivariate {
    fn value(&self, u: f64, v: f64) -> f64;

    fn gradient(&self, u: f64, v: f64) -> [f64; 2] {
        let hu = math::fd_step(u);
        let hv = math::fd_step(v);
        [
            (self.value(u + hu, v) - self.value(u - hu, v)) / (2.0 * hu),
            (self.value(u, v + hv) - self.value(u, v - hv)) / (2.0 * hv),
        ]
    }

    fn hessian(&self, u: f64, v: f64) -> [[f64; 2]; 2] {
        let hu = 1e-4
            * if math::abs(u) > 1.0 {
                math::abs(u)
            } else {
                1.0
            };
        let hv = 1e-4
            * if math::abs(v) > 1.0 {
                math::abs(v)
            } else {
                1.0
            };
        let gup = self.gradient(u + hu, v);
        let gum = self.gradient(u - hu, v);
        let gvp = self.gradient(u, v + hv);
        let gvm = self.gradient(u, v - hv);
        let huu = (gup[0] - gum[0]) / (2.0 * hu);
        let hvv = (gvp[1] - gvm[1]) / (2.0 * hv);
        let huv = 0.5 * ((gup[1] - gum[1]) / (2.0 * hu) + (gvp[0] - gvm[0]) / (2.0 * hv));
        [[huu, huv], [huv, hvv]]
    }
}

/// Builtin bivariate functions, closed under the constructions the
/// analyzer needs.
#[derive(Clone)]
pub enum BivariateFn {
    Const(f64),
    /// `scale·(u² + v²)`
    SumSquares {
        scale: f64,
    },
    /// `u·v`
    Product,
    /// `u / v`
    Ratio,
    /// `g(u·v)`
    ProductForm(ProfileFunction),
    /// `g(u / v)`
    RatioForm(ProfileFunction),
    /// `g(u² + v²)`
    RadialForm(ProfileFunction),
    /// `exp(a·(u − v) + c)`
    ExpDifference {
        a: f64,
        c: f64,
    },
    /// `Σ c[i][j]·uⁱ·vʲ`
    Poly(Vec<Vec<f64>>),
    Custom {
        f: PairFn,
        grad: Option<PairGradFn>,
    },
}

impl fmt::Debug for BivariateFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Const(c) => write!(f, "Const({c})"),
            Self::SumSquares { scale } => write!(f, "SumSquares {{ scale: {scale} }}"),
            Self::Product => f.write_str("Product"),
            Self::Ratio => f.write_str("Ratio"),
            Self::ProductForm(g) => write!(f, "ProductForm({g:?})"),
            Self::RatioForm(g) => write!(f, "RatioForm({g:?})"),
            Self::RadialForm(g) => write!(f, "RadialForm({g:?})"),
            Self::ExpDifference { a, c } => write!(f, "ExpDifference {{ a: {a}, c: {c} }}"),
            Self::Poly(c) => write!(f, "Poly({c:?})"),
            Self::Custom { grad, .. } => {
                write!(f, "Custom {{ analytic_gradient: {} }}", grad.is_some())
            }
        }
    }
}

/// Inner variable `w(u, v)` of a composite `g(w)` with its derivatives.
struct Inner {
    w: f64,
    grad: [f64; 2],
    hess: [[f64; 2]; 2],
}

impl BivariateFn {
    pub fn custom(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::Custom {
            f: Arc::new(f),
            grad: None,
        }
    }

    pub fn custom_with_gradient(
        f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        grad: impl Fn(f64, f64) -> [f64; 2] + Send + Sync + 'static,
    ) -> Self {
        Self::Custom {
            f: Arc::new(f),
            grad: Some(Arc::new(grad)),
        }
    }

    fn inner(&self, u: f64, v: f64) -> Option<(Inner, &ProfileFunction)> {
        let (inner, g) = match self {
            Self::ProductForm(g) => (
                Inner {
                    w: u * v,
                    grad: [v, u],
                    hess: [[0.0, 1.0], [1.0, 0.0]],
                },
                g,
            ),
            Self::RatioForm(g) => (
                Inner {
                    w: u / v,
                    grad: [1.0 / v, -u / (v * v)],
                    hess: [
                        [0.0, -1.0 / (v * v)],
                        [-1.0 / (v * v), 2.0 * u / (v * v * v)],
                    ],
                },
                g,
            ),
            Self::RadialForm(g) => (
                Inner {
                    w: u * u + v * v,
                    grad: [2.0 * u, 2.0 * v],
                    hess: [[2.0, 0.0], [0.0, 2.0]],
                },
                g,
            ),
            _ => return None,
        };
        Some((inner, g))
    }

    fn poly_eval(c: &[Vec<f64>], u: f64, v: f64, du: usize, dv: usize) -> f64 {
        let mut acc = 0.0;
        for (i, row) in c.iter().enumerate() {
            if i < du {
                continue;
            }
            let mut fu = 1.0;
            for k in 0..du {
                fu *= (i - k) as f64;
            }
            let upow = math::powi(u, (i - du) as i32);
            for (j, &cij) in row.iter().enumerate() {
                if j < dv || cij == 0.0 {
                    continue;
                }
                let mut fv = 1.0;
                for k in 0..dv {
                    fv *= (j - k) as f64;
                }
                acc += cij * fu * fv * upow * math::powi(v, (j - dv) as i32);
            }
        }
        acc
    }
}

impl Bivariate for BivariateFn {
    fn value(&self, u: f64, v: f64) -> f64 {
        match self {
            Self::Const(c) => *c,
            Self::SumSquares { scale } => scale * (u * u + v * v),
            Self::Product => u * v,
            Self::Ratio => u / v,
            Self::ExpDifference { a, c } => math::exp(a * (u - v) + c),
            Self::Poly(c) => Self::poly_eval(c, u, v, 0, 0),
            Self::Custom { f, .. } => f(u, v),
            _ => {
                let (inner, g) = self.inner(u, v).expect("composite variant");
                g.value(inner.w)
            }
        }
    }

    fn gradient(&self, u: f64, v: f64) -> [f64; 2] {
        match self {
            Self::Const(_) => [0.0, 0.0],
            Self::SumSquares { scale } => [2.0 * scale * u, 2.0 * scale * v],
            Self::Product => [v, u],
            Self::Ratio => [1.0 / v, -u / (v * v)],
            Self::ExpDifference { a, c } => {
                let e = math::exp(a * (u - v) + c);
                [a * e, -a * e]
            }
            Self::Poly(c) => [
                Self::poly_eval(c, u, v, 1, 0),
                Self::poly_eval(c, u, v, 0, 1),
            ],
            Self::Custom { f, grad } => match grad {
                Some(g) => g(u, v),
                None => {
                    let hu = math::fd_step(u);
                    let hv = math::fd_step(v);
                    [
                        (f(u + hu, v) - f(u - hu, v)) / (2.0 * hu),
                        (f(u, v + hv) - f(u, v - hv)) / (2.0 * hv),
                    ]
                }
            },
            _ => {
                let (inner, g) = self.inner(u, v).expect("composite variant");
                let dg = g.d1(inner.w);
                [dg * inner.grad[0], dg * inner.grad[1]]
            }
        }
    }

    fn hessian(&self, u: f64, v: f64) -> [[f64; 2]; 2] {
        match self {
            Self::Const(_) => [[0.0; 2]; 2],
            Self::SumSquares { scale } => [[2.0 * scale, 0.0], [0.0, 2.0 * scale]],
            Self::Product => [[0.0, 1.0], [1.0, 0.0]],
            Self::Ratio => [
                [0.0, -1.0 / (v * v)],
                [-1.0 / (v * v), 2.0 * u / (v * v * v)],
            ],
            Self::ExpDifference { a, c } => {
                let e = a * a * math::exp(a * (u - v) + c);
                [[e, -e], [-e, e]]
            }
            Self::Poly(c) => {
                let uv = Self::poly_eval(c, u, v, 1, 1);
                [
                    [Self::poly_eval(c, u, v, 2, 0), uv],
                    [uv, Self::poly_eval(c, u, v, 0, 2)],
                ]
            }
            Self::Custom { .. } => fd_hessian(self, u, v),
            _ => {
                let (inner, g) = self.inner(u, v).expect("composite variant");
                let d1 = g.d1(inner.w);
                let d2 = g.d2(inner.w);
                let mut h = [[0.0; 2]; 2];
                for (i, row) in h.iter_mut().enumerate() {
                    for (j, hij) in row.iter_mut().enumerate() {
                        *hij = d2 * inner.grad[i] * inner.grad[j] + d1 * inner.hess[i][j];
                    }
                }
                h
            }
        }
    }
}

fn fd_hessian(f: &BivariateFn, u: f64, v: f64) -> [[f64; 2]; 2] {
    struct Plain<'a>(&'a BivariateFn);
    impl Bivariate for Plain<'_> {
        fn value(&self, u: f64, v: f64) -> f64 {
            self.0.value(u, v)
        }
        fn gradient(&self, u: f64, v: f64) -> [f64; 2] {
            self.0.gradient(u, v)
        }
    }
    Plain(f).hessian(u, v)
}
