//! Curves with a prescribed intrinsic fraction function.
//!
//! Given an angular function `φ(s)` (the polar angle of the unit tangent) and a
//! fraction function `f(s) = τ/κ`, the curve is
//!
//! ```text
//! I(s)  = I₀ + ∫_a^s f φ' sin φ
//! θ'(s) = φ' csc φ · I / sqrt(sin²φ − I²)
//! ρ(s)  = ρ₀ + ∫_a^s (sin φ cos θ, sin φ sin θ, cos φ),   θ = θ₀ + ∫ θ'
//! ```
//!
//! It is unit speed by construction and has
//! `κ = φ' sin φ / sqrt(sin²φ − I²)`, `τ = f κ`, and normal-indicatrix geodesic
//! curvature `σ = f' / ((1 + f²)^{3/2} κ)`.
//!
//! The angular function must satisfy `(cos φ)' < 0` and `sin²φ − I² > 0`
//! on the open interval; [`validate_domain`] checks both on the grid.

use std::fmt;

use crate::exprlang::{ExprError, ScalarExpr};
use crate::frenet::{PartialFn, EPS_KAPPA};
use crate::numerics::{self, CurveSamples, Frame, Grid, GridFn, NumericsError, Vec3};
use crate::par;

/// Margin required on both admissibility conditions.
pub const EPS_DOM: f64 = 1e-9;
/// Smallest `sin φ` accepted at any sample.
pub const SIN_GUARD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IntrinsicError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("angular function outside the admissible set: {0}")]
    Domain(Box<DomainReport>),
}

/// A scalar input: either an expression or samples on the spec grid.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarFn {
    Expr(ScalarExpr),
    /// Tabulated values; the derivative falls back to finite differences.
    Table { values: Vec<f64>, derivative: Option<Vec<f64>> },
}

impl From<ScalarExpr> for ScalarFn {
    fn from(e: ScalarExpr) -> Self {
        ScalarFn::Expr(e)
    }
}

impl ScalarFn {
    pub fn constant(value: f64) -> Self {
        ScalarFn::Expr(ScalarExpr::constant(value))
    }

    /// Values and first derivatives on `grid`.
    pub fn sample(&self, grid: &Grid) -> Result<(Vec<f64>, Vec<f64>), IntrinsicError> {
        match self {
            ScalarFn::Expr(e) => {
                let de = e.derive();
                let values = par::try_map_indices(grid.len(), |i| e.eval(grid.s(i)))?;
                let derivs = par::try_map_indices(grid.len(), |i| de.eval(grid.s(i)))?;
                Ok((values, derivs))
            }
            ScalarFn::Table { values, derivative } => {
                let f = GridFn::new(*grid, values.clone())?;
                let d = match derivative {
                    Some(d) => GridFn::new(*grid, d.clone())?,
                    None => numerics::finite_diff(&f, 1)?,
                };
                Ok((f.into_values(), d.into_values()))
            }
        }
    }
}

/// Full description of an intrinsic representation curve.
#[derive(Debug, Clone, PartialEq)]
pub struct IntrinsicSpec {
    /// Polar angle of the tangent, radians.
    pub polar: ScalarFn,
    /// Fraction function τ/κ.
    pub fraction: ScalarFn,
    pub grid: Grid,
    /// `I(a)`, the constant of the inner integral.
    pub inner_offset: f64,
    /// `θ(a)`, radians.
    pub theta0: f64,
    /// `ρ(a)`.
    pub base_point: Vec3,
}

impl IntrinsicSpec {
    pub fn new(polar: impl Into<ScalarFn>, fraction: impl Into<ScalarFn>, grid: Grid) -> Self {
        Self {
            polar: polar.into(),
            fraction: fraction.into(),
            grid,
            inner_offset: 0.0,
            theta0: 0.0,
            base_point: Vec3::zeros(),
        }
    }

    pub fn with_inner_offset(mut self, v: f64) -> Self {
        self.inner_offset = v;
        self
    }

    pub fn with_theta0(mut self, v: f64) -> Self {
        self.theta0 = v;
        self
    }

    pub fn with_base_point(mut self, p: Vec3) -> Self {
        self.base_point = p;
        self
    }

    /// Same construction on another grid over the same interval.
    ///
    /// Only expression inputs can be resampled; tabulated inputs return `None`.
    pub fn with_grid(&self, grid: Grid) -> Option<Self> {
        let tabulated = |f: &ScalarFn| matches!(f, ScalarFn::Table { .. });
        if tabulated(&self.polar) || tabulated(&self.fraction) {
            return None;
        }
        Some(Self { grid, ..self.clone() })
    }
}

/// Which admissibility condition failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainViolation {
    /// `(cos φ)' < 0`
    Monotone,
    /// `1 > cos²φ + I²`
    Bound,
    /// `sin φ >= SIN_GUARD`
    SinGuard,
}

impl fmt::Display for DomainViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DomainViolation::Monotone => "(cos phi)' < 0 violated",
            DomainViolation::Bound => "1 > cos^2 phi + I^2 violated",
            DomainViolation::SinGuard => "sin phi >= 1e-6 guard violated",
        })
    }
}

/// Outcome of [`validate_domain`].
#[derive(Debug, Clone, PartialEq)]
pub struct DomainReport {
    pub valid: bool,
    /// min of `-(cos φ)'`
    pub min_monotone_margin: f64,
    /// min of `1 - cos²φ - I²`
    pub min_domain_margin: f64,
    pub min_sin_phi: f64,
    pub first_violation_s: Option<f64>,
    pub violation: Option<DomainViolation>,
}

impl fmt::Display for DomainReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.violation, self.first_violation_s) {
            (Some(v), Some(s)) => write!(
                f,
                "{v} at s = {s} (min monotone margin {:e}, min domain margin {:e})",
                self.min_monotone_margin, self.min_domain_margin
            ),
            _ => write!(
                f,
                "valid (min monotone margin {:e}, min domain margin {:e})",
                self.min_monotone_margin, self.min_domain_margin
            ),
        }
    }
}

/// Inputs sampled on the grid together with the inner integral `I`.
#[derive(Debug, Clone)]
pub struct SampledInputs {
    pub grid: Grid,
    pub phi: Vec<f64>,
    pub dphi: Vec<f64>,
    pub fraction: Vec<f64>,
    pub dfraction: Vec<f64>,
    pub inner: Vec<f64>,
}

impl SampledInputs {
    pub fn new(spec: &IntrinsicSpec) -> Result<Self, IntrinsicError> {
        let grid = spec.grid;
        let (phi, dphi) = spec.polar.sample(&grid)?;
        let (fraction, dfraction) = spec.fraction.sample(&grid)?;
        let integrand: Vec<f64> = (0..grid.len())
            .map(|i| fraction[i] * dphi[i] * phi[i].sin())
            .collect();
        let inner = numerics::cumulative_values(&integrand, grid.step(), spec.inner_offset)?;
        Ok(Self { grid, phi, dphi, fraction, dfraction, inner })
    }

    /// `sin²φ − I²` at sample `i`.
    pub fn radicand(&self, i: usize) -> f64 {
        let sp = self.phi[i].sin();
        sp * sp - self.inner[i] * self.inner[i]
    }

    pub fn report(&self) -> DomainReport {
        let n = self.grid.len();
        let mut min_mono = f64::INFINITY;
        let mut min_dom = f64::INFINITY;
        let mut min_sin = f64::INFINITY;
        let mut first: Option<(f64, DomainViolation)> = None;
        for i in 0..n {
            let sp = self.phi[i].sin();
            let mono = self.dphi[i] * sp;
            let dom = self.radicand(i);
            let endpoint = i == 0 || i == n - 1;
            // The conditions hold on the open interval; at the two boundary
            // samples only the weak form of the monotonicity condition applies.
            let mono_ok = if endpoint { mono >= -EPS_DOM } else { mono > EPS_DOM };
            if !endpoint || !mono_ok {
                min_mono = min_mono.min(mono);
            }
            min_dom = min_dom.min(dom);
            min_sin = min_sin.min(sp);
            let kind = if !(sp >= SIN_GUARD) {
                Some(DomainViolation::SinGuard)
            } else if !mono_ok {
                Some(DomainViolation::Monotone)
            } else if !(dom > EPS_DOM) {
                Some(DomainViolation::Bound)
            } else {
                None
            };
            if let (None, Some(k)) = (first, kind) {
                first = Some((self.grid.s(i), k));
            }
        }
        DomainReport {
            valid: first.is_none(),
            min_monotone_margin: min_mono,
            min_domain_margin: min_dom,
            min_sin_phi: min_sin,
            first_violation_s: first.map(|f| f.0),
            violation: first.map(|f| f.1),
        }
    }
}

/// Checks the admissibility conditions at every grid sample.
pub fn validate_domain(spec: &IntrinsicSpec) -> Result<DomainReport, IntrinsicError> {
    Ok(SampledInputs::new(spec)?.report())
}

/// A validated spec with its sampled inputs; the closed forms and the
/// synthesis are methods on this.
#[derive(Debug, Clone)]
pub struct IntrinsicCurve {
    spec: IntrinsicSpec,
    inputs: SampledInputs,
    report: DomainReport,
}

impl IntrinsicCurve {
    pub fn new(spec: &IntrinsicSpec) -> Result<Self, IntrinsicError> {
        let inputs = SampledInputs::new(spec)?;
        let report = inputs.report();
        if !report.valid {
            return Err(IntrinsicError::Domain(Box::new(report)));
        }
        Ok(Self { spec: spec.clone(), inputs, report })
    }

    pub fn spec(&self) -> &IntrinsicSpec {
        &self.spec
    }

    pub fn inputs(&self) -> &SampledInputs {
        &self.inputs
    }

    pub fn report(&self) -> &DomainReport {
        &self.report
    }

    pub fn grid(&self) -> Grid {
        self.spec.grid
    }

    fn grid_fn(&self, f: impl Fn(usize) -> f64 + Sync + Send) -> Result<GridFn, IntrinsicError> {
        let grid = self.grid();
        Ok(GridFn::new(grid, par::map_indices(grid.len(), f))?)
    }

    pub fn theta_prime(&self) -> Result<GridFn, IntrinsicError> {
        let x = &self.inputs;
        self.grid_fn(|i| {
            x.dphi[i] / x.phi[i].sin() * x.inner[i] / x.radicand(i).sqrt()
        })
    }

    pub fn theta(&self) -> Result<GridFn, IntrinsicError> {
        Ok(numerics::cumulative_integral(&self.theta_prime()?, self.spec.theta0)?)
    }

    /// Samples the curve by triple-nested cumulative integration.
    pub fn synthesize(&self) -> Result<CurveSamples, IntrinsicError> {
        let grid = self.grid();
        let theta = self.theta()?;
        let (phi, th) = (&self.inputs.phi, theta.values());
        let h = grid.step();
        let p0 = self.spec.base_point;
        let vx: Vec<f64> = (0..grid.len()).map(|i| phi[i].sin() * th[i].cos()).collect();
        let vy: Vec<f64> = (0..grid.len()).map(|i| phi[i].sin() * th[i].sin()).collect();
        let vz: Vec<f64> = phi.iter().map(|p| p.cos()).collect();
        let x = numerics::cumulative_values(&vx, h, p0.x)?;
        let y = numerics::cumulative_values(&vy, h, p0.y)?;
        let z = numerics::cumulative_values(&vz, h, p0.z)?;
        Ok(CurveSamples::from_components(grid, &x, &y, &z)?)
    }

    /// `κ = φ' sin φ / sqrt(sin²φ − I²)`
    pub fn closed_curvature(&self) -> Result<GridFn, IntrinsicError> {
        let x = &self.inputs;
        self.grid_fn(|i| x.dphi[i] * x.phi[i].sin() / x.radicand(i).sqrt())
    }

    /// `τ = f κ`
    pub fn closed_torsion(&self) -> Result<GridFn, IntrinsicError> {
        let kappa = self.closed_curvature()?;
        let x = &self.inputs;
        self.grid_fn(|i| x.fraction[i] * kappa.at(i))
    }

    /// `σ = f' sqrt(sin²φ − I²) / ((1 + f²)^{3/2} φ' sin φ)`, undefined where
    /// `κ < EPS_KAPPA` unless `f'` vanishes there.
    pub fn closed_sigma(&self) -> Result<PartialFn, IntrinsicError> {
        let x = &self.inputs;
        let values = par::map_indices(self.grid().len(), |i| {
            let (f, df) = (x.fraction[i], x.dfraction[i]);
            let mono = x.dphi[i] * x.phi[i].sin();
            let root = x.radicand(i).sqrt();
            if df == 0.0 {
                Some(0.0)
            } else if mono < EPS_KAPPA * root {
                None
            } else {
                Some(df * root / ((1.0 + f * f).powf(1.5) * mono))
            }
        });
        Ok(PartialFn::new(self.grid(), values)?)
    }

    /// Frenet frames from the analytic tangent and its derivative; `None`
    /// where the curvature vanishes.
    pub fn closed_frames(&self) -> Result<Vec<Option<Frame>>, IntrinsicError> {
        let theta = self.theta()?;
        let theta_prime = self.theta_prime()?;
        let x = &self.inputs;
        let frames = par::map_indices(self.grid().len(), |i| {
            let (sp, cp) = x.phi[i].sin_cos();
            let (st, ct) = theta.at(i).sin_cos();
            let (dp, dt) = (x.dphi[i], theta_prime.at(i));
            let t = Vec3::new(sp * ct, sp * st, cp);
            let dtan = Vec3::new(
                dp * cp * ct - dt * sp * st,
                dp * cp * st + dt * sp * ct,
                -dp * sp,
            );
            if dtan.norm() < EPS_KAPPA {
                return None;
            }
            Frame::from_tangent_normal(t, dtan)
        });
        Ok(frames)
    }
}

pub fn theta_prime(spec: &IntrinsicSpec) -> Result<GridFn, IntrinsicError> {
    IntrinsicCurve::new(spec)?.theta_prime()
}

pub fn synthesize(spec: &IntrinsicSpec) -> Result<CurveSamples, IntrinsicError> {
    IntrinsicCurve::new(spec)?.synthesize()
}

pub fn closed_curvature(spec: &IntrinsicSpec) -> Result<GridFn, IntrinsicError> {
    IntrinsicCurve::new(spec)?.closed_curvature()
}

pub fn closed_torsion(spec: &IntrinsicSpec) -> Result<GridFn, IntrinsicError> {
    IntrinsicCurve::new(spec)?.closed_torsion()
}

pub fn closed_sigma(spec: &IntrinsicSpec) -> Result<PartialFn, IntrinsicError> {
    IntrinsicCurve::new(spec)?.closed_sigma()
}
