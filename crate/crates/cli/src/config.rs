//! JSON run configuration. Every struct rejects unknown keys; enums are
//! externally tagged, e.g. `{"sine": {"amp": 1.0, "freq": 2.0}}` or
//! `"product"`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use shearwave_core::exact::Sign;
use shearwave_core::simulate::{Scheme, SimulationConfig, SnapshotPolicy};
use shearwave_core::{
    Axis, BivariateFn, Boundary, Grid1D, PolarState, ProfileFunction, ShearModulus, TempleFlux,
};

use crate::error::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    /// Output directory; `--out` takes precedence.
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Seed for the random negative controls and jet samples.
    #[serde(default)]
    pub seed: u64,
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.command.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Simulate(SimulateCmd),
    Exact(ExactCmd),
    Classify(ClassifyCmd),
    Hodograph(HodographCmd),
    Verify(VerifyCmd),
    Convergence(ConvergenceCmd),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Simulate(_) => "simulate",
            Self::Exact(_) => "exact",
            Self::Classify(_) => "classify",
            Self::Hodograph(_) => "hodograph",
            Self::Verify(_) => "verify",
            Self::Convergence(_) => "convergence",
        }
    }

    /// Checks everything that can be checked without running a solver.
    fn validate(&self) -> Result<(), CliError> {
        match self {
            Self::Simulate(c) => {
                c.grid.build()?;
                c.scheme.build(None)?;
                c.system.build_modulus()?;
                match (&c.system, &c.initial) {
                    (SystemConfig::Full { .. }, InitialData::Carroll { .. })
                    | (SystemConfig::Asymptotic { .. }, InitialData::ConstantModulus { .. })
                    | (_, InitialData::Profiles(_)) => Ok(()),
                    _ => Err(CliError::Config(
                        "initial data kind does not match the system".into(),
                    )),
                }
            }
            Self::Exact(c) => {
                c.rows.build()?;
                c.cols.build()?;
                if let ExactSolution::Carroll { modulus, .. }
                | ExactSolution::GeneralizedCarroll { modulus, .. } = &c.solution
                {
                    modulus.build()?;
                }
                Ok(())
            }
            Self::Classify(c) => {
                c.u.build()?;
                c.v.build()?;
                Ok(())
            }
            Self::Hodograph(c) => {
                c.theta.build()?;
                c.rho.build()?;
                nonzero_beta(c.beta)
            }
            Self::Verify(c) => c.validate(),
            Self::Convergence(c) => c.validate(),
        }
    }
}

fn nonzero_beta(beta: f64) -> Result<(), CliError> {
    if beta == 0.0 || !beta.is_finite() {
        return Err(CliError::Config("beta must be finite and nonzero".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileConfig {
    Const(f64),
    Linear {
        k: f64,
    },
    Sine {
        amp: f64,
        freq: f64,
        #[serde(default)]
        offset: f64,
    },
    Poly(Vec<f64>),
    Power {
        scale: f64,
        shift: f64,
        exponent: f64,
    },
}

impl ProfileConfig {
    pub fn build(&self) -> ProfileFunction {
        match self {
            Self::Const(c) => ProfileFunction::Const(*c),
            Self::Linear { k } => ProfileFunction::Linear { k: *k },
            Self::Sine { amp, freq, offset } => ProfileFunction::Sine {
                amp: *amp,
                freq: *freq,
                offset: *offset,
            },
            Self::Poly(c) => ProfileFunction::Poly(c.clone()),
            Self::Power {
                scale,
                shift,
                exponent,
            } => ProfileFunction::Power {
                scale: *scale,
                shift: *shift,
                exponent: *exponent,
            },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ModulusConfig {
    MooneyRivlin { mu: f64, rho: f64 },
    Cubic { mu0: f64, mu1: f64, rho: f64 },
    Power { mu: f64, n: f64, rho: f64 },
    General { q: ProfileConfig, rho: f64 },
}

impl ModulusConfig {
    pub fn build(&self) -> Result<ShearModulus, CliError> {
        let m = match self {
            Self::MooneyRivlin { mu, rho } => ShearModulus::mooney_rivlin(*mu, *rho),
            Self::Cubic { mu0, mu1, rho } => ShearModulus::cubic(*mu0, *mu1, *rho),
            Self::Power { mu, n, rho } => ShearModulus::power(*mu, *n, *rho),
            Self::General { q, rho } => ShearModulus::new(q.build(), *rho),
        };
        m.map_err(|e| CliError::Config(format!("modulus: {e}")))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FluxConfig {
    Const(f64),
    SumSquares { scale: f64 },
    Product,
    Ratio,
    ProductForm(ProfileConfig),
    RatioForm(ProfileConfig),
    RadialForm(ProfileConfig),
    ExpDifference { a: f64, c: f64 },
    Poly(Vec<Vec<f64>>),
}

impl FluxConfig {
    pub fn function(&self) -> BivariateFn {
        match self {
            Self::Const(c) => BivariateFn::Const(*c),
            Self::SumSquares { scale } => BivariateFn::SumSquares { scale: *scale },
            Self::Product => BivariateFn::Product,
            Self::Ratio => BivariateFn::Ratio,
            Self::ProductForm(g) => BivariateFn::ProductForm(g.build()),
            Self::RatioForm(g) => BivariateFn::RatioForm(g.build()),
            Self::RadialForm(g) => BivariateFn::RadialForm(g.build()),
            Self::ExpDifference { a, c } => BivariateFn::ExpDifference { a: *a, c: *c },
            Self::Poly(c) => BivariateFn::Poly(c.clone()),
        }
    }

    pub fn build(&self) -> TempleFlux {
        TempleFlux::new(self.function())
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum SignConfig {
    Plus,
    Minus,
}

impl From<SignConfig> for Sign {
    fn from(s: SignConfig) -> Self {
        match s {
            SignConfig::Plus => Sign::Plus,
            SignConfig::Minus => Sign::Minus,
        }
    }
}

/// `points` samples spanning `[start, end]`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisConfig {
    pub start: f64,
    pub end: f64,
    pub points: usize,
}

impl AxisConfig {
    pub fn build(&self) -> Result<Axis, CliError> {
        if !(self.end > self.start) {
            return Err(CliError::Config(format!(
                "axis end {} must exceed start {}",
                self.end, self.start
            )));
        }
        Axis::spanning(self.start, self.end, self.points)
            .map_err(|e| CliError::Config(format!("axis: {e}")))
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, Default, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryConfig {
    #[default]
    Periodic,
    Outflow,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub cells: usize,
    pub start: f64,
    pub end: f64,
    #[serde(default)]
    pub boundary: BoundaryConfig,
}

impl GridConfig {
    pub fn build(&self) -> Result<Grid1D, CliError> {
        self.with_cells(self.cells)
    }

    pub fn with_cells(&self, cells: usize) -> Result<Grid1D, CliError> {
        let boundary = match self.boundary {
            BoundaryConfig::Periodic => Boundary::Periodic,
            BoundaryConfig::Outflow => Boundary::Outflow,
        };
        Grid1D::new(cells, self.start, self.end, boundary)
            .map_err(|e| CliError::Config(format!("grid: {e}")))
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, Default, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    #[default]
    LaxFriedrichs,
    MusclMinmod,
}

impl From<SchemeKind> for Scheme {
    fn from(s: SchemeKind) -> Self {
        match s {
            SchemeKind::LaxFriedrichs => Scheme::LaxFriedrichs,
            SchemeKind::MusclMinmod => Scheme::MusclMinmod,
        }
    }
}

fn default_cfl() -> f64 {
    0.5
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeConfig {
    #[serde(default)]
    pub kind: SchemeKind,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    /// Final value of the evolution coordinate.
    pub end: f64,
    /// Snapshot spacing in the evolution coordinate; only the initial and
    /// final states are written when absent.
    #[serde(default)]
    pub snapshot_interval: Option<f64>,
    #[serde(default)]
    pub blowup_factor: Option<f64>,
    #[serde(default)]
    pub max_steps: Option<usize>,
}

impl SchemeConfig {
    /// `end` overrides the configured end coordinate (used for one-period
    /// runs whose length is only known after building the oracle).
    pub fn build(&self, end: Option<f64>) -> Result<SimulationConfig, CliError> {
        let mut cfg = SimulationConfig::new(self.kind.into(), self.cfl, end.unwrap_or(self.end));
        if let Some(d) = self.snapshot_interval {
            cfg.snapshots = SnapshotPolicy::Interval(d);
        }
        if let Some(f) = self.blowup_factor {
            cfg.blowup_factor = f;
        }
        if let Some(n) = self.max_steps {
            cfg.max_steps = n;
        }
        cfg.validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SystemConfig {
    /// `(U, M, V, N)` in `t`.
    Full { modulus: ModulusConfig },
    /// `(U, V)` in `X`.
    Asymptotic { beta: f64 },
    /// `ρ` in `X`.
    Scalar { beta: f64 },
    /// `(u, v)` in `t`.
    Temple { flux: FluxConfig },
}

impl SystemConfig {
    fn build_modulus(&self) -> Result<(), CliError> {
        match self {
            Self::Full { modulus } => modulus.build().map(|_| ()),
            Self::Asymptotic { beta } | Self::Scalar { beta } if !beta.is_finite() => {
                Err(CliError::Config("beta must be finite".into()))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialData {
    /// Carroll wave at `t = 0`; the run covers `periods` full periods when
    /// given, otherwise up to the scheme's `end`.
    Carroll {
        amplitude: f64,
        wavenumber: f64,
        polarization: SignConfig,
        #[serde(default)]
        periods: Option<f64>,
    },
    /// Constant-modulus solution at `X = 0`.
    ConstantModulus {
        amplitude: f64,
        theta: ProfileConfig,
    },
    /// Profiles per field name; absent fields start at zero.
    Profiles(BTreeMap<String, ProfileConfig>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateCmd {
    pub system: SystemConfig,
    pub grid: GridConfig,
    pub scheme: SchemeConfig,
    pub initial: InitialData,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedConfig {
    pub theta: f64,
    pub rho: f64,
}

impl From<SeedConfig> for PolarState {
    fn from(s: SeedConfig) -> Self {
        PolarState::new(s.rho, s.theta)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ExactSolution {
    /// Rows `t`, columns `x`.
    Carroll {
        modulus: ModulusConfig,
        amplitude: f64,
        wavenumber: f64,
        polarization: SignConfig,
    },
    /// Rows `t`, columns `x`.
    GeneralizedCarroll {
        modulus: ModulusConfig,
        amplitude: f64,
        profile: ProfileConfig,
        direction: SignConfig,
        polarization: SignConfig,
    },
    /// Rows `X`, columns `τ`.
    ConstantModulus {
        beta: f64,
        amplitude: f64,
        theta: ProfileConfig,
    },
    /// Rows `X`, columns `τ`.
    SimpleWave { beta: f64, phi: ProfileConfig },
    /// Rows `X`, columns `τ`; `seed` approximates `(θ, ρ)` at the first node.
    Hodograph {
        beta: f64,
        s3: ProfileConfig,
        s4: ProfileConfig,
        seed: SeedConfig,
    },
    /// Rows `t`, columns `x`.
    Overdetermined {
        flux: FluxConfig,
        level: f64,
        profile: ProfileConfig,
        direction: SignConfig,
        v_bracket: [f64; 2],
    },
    /// Rows `t` (also the integration grid), columns `x`.
    Separable {
        flux: FluxConfig,
        k: f64,
        phi0: f64,
        dphi0: f64,
    },
}

fn default_levels() -> usize {
    3
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExactCmd {
    pub solution: ExactSolution,
    pub rows: AxisConfig,
    pub cols: AxisConfig,
    /// Also sample on nested refinements and check the matching residual.
    #[serde(default)]
    pub self_check: bool,
    #[serde(default = "default_levels")]
    pub levels: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyCmd {
    pub flux: FluxConfig,
    pub u: AxisConfig,
    pub v: AxisConfig,
    /// Decoupling chart `α`; `α = P` when absent.
    #[serde(default)]
    pub chart: Option<FluxConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HodographCmd {
    pub beta: f64,
    pub s3: ProfileConfig,
    pub s4: ProfileConfig,
    pub theta: AxisConfig,
    pub rho: AxisConfig,
}

/// Fields over `(X, τ)` for the polar residual studies.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PolarField {
    ConstantModulus {
        amplitude: f64,
        theta: ProfileConfig,
    },
    Hodograph {
        s3: ProfileConfig,
        s4: ProfileConfig,
        seed: SeedConfig,
    },
    SimpleWave {
        phi: ProfileConfig,
    },
    /// Non-solution control: constant `ρ` with `θ = f(X) + g(τ)`.
    ArbitraryTheta {
        rho: f64,
        theta_x: ProfileConfig,
        theta_tau: ProfileConfig,
    },
}

/// Fields over `(t, x)` for the full-system residual.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FullField {
    Carroll {
        amplitude: f64,
        wavenumber: f64,
        polarization: SignConfig,
    },
    Zero,
    /// Non-solution control: uniform noise of the given amplitude.
    Noise {
        amplitude: f64,
    },
}

/// Fields over `(t, x)` for the Temple residual.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum TempleField {
    Separable {
        k: f64,
        phi0: f64,
        dphi0: f64,
    },
    Overdetermined {
        level: f64,
        profile: ProfileConfig,
        direction: SignConfig,
        v_bracket: [f64; 2],
    },
    Noise {
        amplitude: f64,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SymmetryConfig {
    Hydrodynamic {
        s3: ProfileConfig,
        s4: ProfileConfig,
    },
    /// Non-symmetry control `φ^θ = θ_τ²`, `φ^ρ = 0`.
    TauSquared,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Study {
    FullResidual {
        modulus: ModulusConfig,
        field: FullField,
        rows: AxisConfig,
        cols: AxisConfig,
    },
    AsymptoticResidual {
        beta: f64,
        field: PolarField,
        rows: AxisConfig,
        cols: AxisConfig,
    },
    TempleResidual {
        flux: FluxConfig,
        field: TempleField,
        rows: AxisConfig,
        cols: AxisConfig,
    },
    Conservation {
        beta: f64,
        cons1: ProfileConfig,
        cons2: ProfileConfig,
        field: PolarField,
        rows: AxisConfig,
        cols: AxisConfig,
    },
    LinearizedSymmetry {
        beta: f64,
        symmetry: SymmetryConfig,
        field: PolarField,
        rows: AxisConfig,
        cols: AxisConfig,
    },
    /// Bracket with the flow on random jets; `perturbation` adds `ε ρ_τ²`
    /// to `φ^ρ`.
    Commutator {
        beta: f64,
        s3: ProfileConfig,
        s4: ProfileConfig,
        jets: usize,
        #[serde(default)]
        perturbation: Option<f64>,
    },
}

fn default_target() -> f64 {
    shearwave_core::verify::DEFAULT_TARGET
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyCmd {
    pub study: Study,
    #[serde(default = "default_levels")]
    pub levels: usize,
    #[serde(default = "default_target")]
    pub target: f64,
}

impl VerifyCmd {
    fn validate(&self) -> Result<(), CliError> {
        let axes = match &self.study {
            Study::FullResidual {
                modulus,
                rows,
                cols,
                ..
            } => {
                modulus.build()?;
                Some((rows, cols))
            }
            Study::AsymptoticResidual {
                beta, rows, cols, ..
            }
            | Study::Conservation {
                beta, rows, cols, ..
            }
            | Study::LinearizedSymmetry {
                beta, rows, cols, ..
            } => {
                if !beta.is_finite() {
                    return Err(CliError::Config("beta must be finite".into()));
                }
                Some((rows, cols))
            }
            Study::TempleResidual { rows, cols, .. } => Some((rows, cols)),
            Study::Commutator { jets, .. } => {
                if *jets == 0 {
                    return Err(CliError::Config("need at least one jet".into()));
                }
                None
            }
        };
        if let Some((r, c)) = axes {
            r.build()?;
            c.build()?;
            if self.levels < 2 {
                return Err(CliError::Config("need at least 2 refinement levels".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ConvergenceSystem {
    Full { modulus: ModulusConfig },
    Asymptotic { beta: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ConvergenceInitial {
    /// `periods` overrides the scheme's `end` with whole wave periods.
    Carroll {
        amplitude: f64,
        wavenumber: f64,
        polarization: SignConfig,
        #[serde(default)]
        periods: Option<f64>,
    },
    ConstantModulus {
        amplitude: f64,
        theta: ProfileConfig,
    },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceKind {
    /// The initial data's exact solution.
    Exact,
    /// The finest run.
    SelfFinest,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq, Default)]
#[serde(rename_all = "snake_case")]
pub enum Norm {
    #[default]
    Linf,
    L1,
    L2,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderTarget {
    pub order: f64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub norm: Norm,
}

fn default_tolerance() -> f64 {
    0.3
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceCmd {
    pub system: ConvergenceSystem,
    pub initial: ConvergenceInitial,
    pub grid: GridConfig,
    pub scheme: SchemeConfig,
    /// Cell counts, coarse to fine; each must divide the next for the
    /// self-referenced study.
    pub cells: Vec<usize>,
    pub reference: ReferenceKind,
    pub target: OrderTarget,
}

impl ConvergenceCmd {
    fn validate(&self) -> Result<(), CliError> {
        match (&self.system, &self.initial) {
            (ConvergenceSystem::Full { modulus }, ConvergenceInitial::Carroll { .. }) => {
                modulus.build()?;
            }
            (
                ConvergenceSystem::Asymptotic { beta },
                ConvergenceInitial::ConstantModulus { .. },
            ) => {
                nonzero_beta(*beta)?;
            }
            _ => {
                return Err(CliError::Config(
                    "initial data kind does not match the system".into(),
                ))
            }
        }
        self.scheme.build(None)?;
        let need = if self.reference == ReferenceKind::SelfFinest {
            3
        } else {
            2
        };
        if self.cells.len() < need {
            return Err(CliError::Config(format!(
                "need at least {need} cell counts"
            )));
        }
        for &n in &self.cells {
            self.grid.with_cells(n)?;
        }
        if self.cells.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Config("cell counts must increase".into()));
        }
        Ok(())
    }
}
