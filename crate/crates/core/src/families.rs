//! Named curve generators.
//!
//! Each generator returns an [`IntrinsicSpec`] that reproduces the curve
//! through [`crate::intrinsic`], the curve in its explicit coordinate form,
//! and reference curvature, torsion and σ.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::exprlang::{parse, ExprError, ScalarExpr};
use crate::intrinsic::{IntrinsicError, IntrinsicSpec, ScalarFn};
use crate::numerics::{self, CurveSamples, Grid, GridFn, NumericsError, Vec3};
use crate::par;

/// Samples used to bracket the end of a general helix interval.
const BRACKET_SAMPLES: usize = 16385;
/// Tolerance on the located interval end.
pub const J_END_TOL: f64 = 1e-6;
/// Fraction of the maximal interval kept as working grid.
pub const J_END_SHRINK: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FamilyError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Intrinsic(#[from] IntrinsicError),
}

fn invalid(msg: impl Into<String>) -> FamilyError {
    FamilyError::InvalidParams(msg.into())
}

/// Output shared by all generators.
#[derive(Debug, Clone)]
pub struct Generated {
    pub spec: IntrinsicSpec,
    /// The curve from its explicit coordinate formulas.
    pub display: CurveSamples,
    pub kappa: GridFn,
    pub tau: GridFn,
    pub sigma: GridFn,
}

fn sample(grid: Grid, f: impl Fn(f64) -> f64 + Sync + Send) -> Result<Vec<f64>, NumericsError> {
    Ok(GridFn::from_fn(grid, f)?.into_values())
}

fn sample_expr(grid: Grid, e: &ScalarExpr) -> Result<Vec<f64>, ExprError> {
    par::try_map_indices(grid.len(), |i| e.eval(grid.s(i)))
}

fn check_interval(a: f64, b: f64) -> Result<(), FamilyError> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(invalid(format!("interval ({a}, {b}) must satisfy a < b")));
    }
    Ok(())
}

fn check_phi0(phi0: f64) -> Result<(), FamilyError> {
    if !(phi0.is_finite() && phi0 != 0.0) {
        return Err(invalid(format!("phi0 must be finite and nonzero, got {phi0}")));
    }
    Ok(())
}

/// Constant-fraction helix on `(a, b)` with `τ/κ = φ₀` and polar angle
/// `φ = acos(cos(π(s − a)/(b − a)) / (1 + φ₀²))`.
#[derive(Debug, Clone)]
pub struct ExampleHelix {
    pub phi0: f64,
    pub generated: Generated,
}

impl ExampleHelix {
    /// `κ(s) = π sin x / ((b − a) √(1+φ₀²) √(φ₀² + sin² x))`, `x = π(s − a)/(b − a)`.
    pub fn kappa_at(phi0: f64, a: f64, b: f64, s: f64) -> f64 {
        let k = 1.0 + phi0 * phi0;
        let sx = (PI * (s - a) / (b - a)).sin();
        PI * sx / ((b - a) * k.sqrt() * (phi0 * phi0 + sx * sx).sqrt())
    }
}

pub fn example_helix(phi0: f64, a: f64, b: f64, n: usize) -> Result<ExampleHelix, FamilyError> {
    check_phi0(phi0)?;
    check_interval(a, b)?;
    let grid = Grid::new(a, b, n)?;
    let k = 1.0 + phi0 * phi0;
    let rk = k.sqrt();
    let w = b - a;
    let polar = parse(&format!("acos(cos(pi*(s - ({a:?}))/({w:?}))/({k:?}))"))?;
    let spec = IntrinsicSpec::new(polar, ScalarFn::constant(phi0), grid)
        .with_inner_offset(-phi0 / k)
        .with_theta0((-phi0.abs() / rk).atan2(phi0))
        .with_base_point(Vec3::new(phi0 * a / rk, 0.0, 0.0));

    let arg = |s: f64| PI * (s - a) / w;
    let x = sample(grid, |s| phi0 * s / rk)?;
    let dy = sample(grid, |s| -(phi0 * phi0 + arg(s).sin().powi(2)).sqrt() / k)?;
    let y = numerics::cumulative_values(&dy, grid.step(), 0.0)?;
    let z = sample(grid, |s| w * arg(s).sin() / (k * PI))?;
    let display = CurveSamples::from_components(grid, &x, &y, &z)?;

    let kappa = GridFn::from_fn(grid, |s| ExampleHelix::kappa_at(phi0, a, b, s))?;
    let tau = GridFn::from_fn(grid, |s| phi0 * ExampleHelix::kappa_at(phi0, a, b, s))?;
    let sigma = GridFn::constant(grid, 0.0)?;
    Ok(ExampleHelix { phi0, generated: Generated { spec, display, kappa, tau, sigma } })
}

/// Polar angle of a general helix with prescribed curvature.
#[derive(Debug, Clone)]
pub struct XiProfile {
    /// Working grid `(a, a + (J_end − a)(1 − J_END_SHRINK))`, or `(a, b)` when
    /// the bound is never reached.
    pub grid: Grid,
    /// End of the maximal interval, `b` when the bound is not reached.
    pub j_end: f64,
    pub xi: GridFn,
    pub dxi: GridFn,
    /// Prescribed curvature on the working grid.
    pub kappa: GridFn,
    /// `√(1+φ₀²) ∫_a^s κ`
    pub phase: GridFn,
}

/// `ξ = acos(−sin(√(1+φ₀²) ∫_a^s κ) / √(1+φ₀²))`, valid while
/// `∫_a^s κ < π / (2√(1+φ₀²))`.
///
/// The interval end is bracketed on `[a, b]` and refined by bisection.
pub fn xi_from_curvature(
    kappa: &ScalarExpr,
    phi0: f64,
    a: f64,
    b: f64,
    n: usize,
) -> Result<XiProfile, FamilyError> {
    check_phi0(phi0)?;
    check_interval(a, b)?;
    let rk = (1.0 + phi0 * phi0).sqrt();
    let bound = FRAC_PI_2 / rk;

    let coarse = Grid::new(a, b, BRACKET_SAMPLES)?;
    let kc = sample_expr(coarse, kappa)?;
    if let Some(i) = kc.iter().position(|k| !(*k > 0.0)) {
        return Err(invalid(format!("prescribed curvature must be positive, got {} at s = {}", kc[i], coarse.s(i))));
    }
    let big_k = numerics::cumulative_values(&kc, coarse.step(), 0.0)?;

    let j_end = match big_k.iter().position(|v| *v >= bound) {
        None => b,
        Some(0) => return Err(invalid("empty interval: curvature integral bound violated at s = a")),
        Some(hi) => {
            let integral_to = |s: f64| -> Result<f64, FamilyError> {
                let lo = hi - 1;
                let g = Grid::new(coarse.s(lo), s, 9)?;
                let v = sample_expr(g, kappa)?;
                Ok(big_k[lo] + numerics::cumulative_values(&v, g.step(), 0.0)?[8])
            };
            let (mut lo, mut up) = (coarse.s(hi - 1), coarse.s(hi));
            while up - lo > J_END_TOL {
                let mid = 0.5 * (lo + up);
                if integral_to(mid)? < bound {
                    lo = mid;
                } else {
                    up = mid;
                }
            }
            0.5 * (lo + up)
        }
    };
    let end = if j_end < b { a + (j_end - a) * (1.0 - J_END_SHRINK) } else { b };
    let grid = Grid::new(a, end, n)?;

    let kv = sample_expr(grid, kappa)?;
    let kfn = GridFn::new(grid, kv)?;
    let phase = GridFn::new(grid, numerics::cumulative_values(kfn.values(), grid.step(), 0.0)?.iter().map(|v| rk * v).collect())?;
    let xi = GridFn::new(grid, phase.values().iter().map(|u| (-u.sin() / rk).acos()).collect())?;
    let dxi = GridFn::new(
        grid,
        (0..grid.len()).map(|i| phase.at(i).cos() * kfn.at(i) / xi.at(i).sin()).collect(),
    )?;
    Ok(XiProfile { grid, j_end, xi, dxi, kappa: kfn, phase })
}

/// How the general helix is specified.
#[derive(Debug, Clone, PartialEq)]
pub enum HelixSource {
    /// Prescribed curvature; ξ comes from [`xi_from_curvature`].
    Curvature(ScalarExpr),
    /// Polar angle given directly.
    Angle(ScalarExpr),
}

#[derive(Debug, Clone, PartialEq)]
pub struct HelixParams {
    pub phi0: f64,
    pub a: f64,
    pub b: f64,
    pub n: usize,
    pub source: HelixSource,
}

#[derive(Debug, Clone)]
pub struct GeneralHelix {
    pub phi0: f64,
    pub generated: Generated,
    pub xi: GridFn,
    /// Present for prescribed curvature.
    pub profile: Option<XiProfile>,
    /// `(1/√(1+φ₀²)) ∫ cos(√(1+φ₀²) ∫κ)`, present for prescribed curvature.
    pub classic_x: Option<Vec<f64>>,
}

/// General helix with `τ/κ = φ₀`: explicit form
/// `((1/√k) ∫ √(1 − k cos²ξ), φ₀ s/√k, ∫ cos ξ)` with `k = 1 + φ₀²`.
pub fn general_helix(params: &HelixParams) -> Result<GeneralHelix, FamilyError> {
    let HelixParams { phi0, a, b, n, ref source } = *params;
    check_phi0(phi0)?;
    check_interval(a, b)?;
    let k = 1.0 + phi0 * phi0;
    let rk = k.sqrt();

    let (grid, xi, dxi, profile) = match source {
        HelixSource::Curvature(kappa) => {
            let p = xi_from_curvature(kappa, phi0, a, b, n)?;
            (p.grid, p.xi.clone(), p.dxi.clone(), Some(p))
        }
        HelixSource::Angle(e) => {
            let grid = Grid::new(a, b, n)?;
            let xi = GridFn::new(grid, sample_expr(grid, e)?)?;
            let dxi = GridFn::new(grid, sample_expr(grid, &e.derive())?)?;
            (grid, xi, dxi, None)
        }
    };

    let radicand: Vec<f64> = xi.values().iter().map(|x| 1.0 - k * x.cos().powi(2)).collect();
    if let Some(i) = radicand.iter().position(|r| !(*r > 0.0)) {
        return Err(invalid(format!("1 - (1 + phi0^2) cos^2 xi must be positive, violated at s = {}", grid.s(i))));
    }
    let c0 = xi.at(0).cos();
    let spec = IntrinsicSpec::new(
        ScalarFn::Table { values: xi.values().to_vec(), derivative: Some(dxi.values().to_vec()) },
        ScalarFn::constant(phi0),
        grid,
    )
    .with_inner_offset(-phi0 * c0)
    .with_theta0(phi0.atan2(radicand[0].sqrt()))
    .with_base_point(Vec3::new(0.0, phi0 * a / rk, 0.0));

    let h = grid.step();
    let dx: Vec<f64> = radicand.iter().map(|r| r.sqrt() / rk).collect();
    let dz: Vec<f64> = xi.values().iter().map(|x| x.cos()).collect();
    let x = numerics::cumulative_values(&dx, h, 0.0)?;
    let y = sample(grid, |s| phi0 * s / rk)?;
    let z = numerics::cumulative_values(&dz, h, 0.0)?;
    let display = CurveSamples::from_components(grid, &x, &y, &z)?;

    let kappa = match &profile {
        Some(p) => p.kappa.clone(),
        None => GridFn::new(
            grid,
            (0..grid.len()).map(|i| dxi.at(i) * xi.at(i).sin() / radicand[i].sqrt()).collect(),
        )?,
    };
    let tau = GridFn::new(grid, kappa.values().iter().map(|v| phi0 * v).collect())?;
    let classic_x = match &profile {
        Some(p) => {
            let c: Vec<f64> = p.phase.values().iter().map(|u| u.cos() / rk).collect();
            Some(numerics::cumulative_values(&c, h, 0.0)?)
        }
        None => None,
    };
    let generated = Generated { spec, display, kappa, tau, sigma: GridFn::constant(grid, 0.0)? };
    Ok(GeneralHelix { phi0, generated, xi, profile, classic_x })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlantParams {
    /// Geodesic curvature of the normal indicatrix.
    pub m: f64,
    pub fraction: ScalarExpr,
    pub a: f64,
    pub b: f64,
    pub n: usize,
}

#[derive(Debug, Clone)]
pub struct SlantHelix {
    pub m: f64,
    pub generated: Generated,
    /// `√(1+m²) arctan(f)/m − arctan(m f/√(1+m²))`
    pub phase: GridFn,
}

/// Slant helix with `σ = m` for fraction function `f`:
/// `(∫ A cos P, ∓∫ A sin P, ∓∫ f/√((1+m²)(1+f²)))` with the upper sign for `m > 0`,
/// `A² = (1 + m² + m² f²)/((1+m²)(1+f²))` and `P` the phase.
pub fn slant_helix(params: &SlantParams) -> Result<SlantHelix, FamilyError> {
    let SlantParams { m, ref fraction, a, b, n } = *params;
    if !(m.is_finite() && m != 0.0) {
        return Err(invalid(format!("m must be finite and nonzero, got {m}")));
    }
    check_interval(a, b)?;
    let grid = Grid::new(a, b, n)?;
    let f = sample_expr(grid, fraction)?;
    let df = sample_expr(grid, &fraction.derive())?;
    if let Some(i) = df.iter().position(|d| !(m.signum() * d > 0.0)) {
        let need = if m > 0.0 { "positive" } else { "negative" };
        return Err(invalid(format!(
            "fraction derivative must be {need} for m = {m}, got {} at s = {}",
            df[i],
            grid.s(i)
        )));
    }

    let sign = -m.signum();
    let q = 1.0 + m * m;
    let rq = q.sqrt();
    let nn = grid.len();
    let cos_xi: Vec<f64> = f.iter().map(|f| sign * f / (q * (1.0 + f * f)).sqrt()).collect();
    let xi: Vec<f64> = cos_xi.iter().map(|c| c.acos()).collect();
    let dxi: Vec<f64> = (0..nn)
        .map(|i| {
            let dcos = sign * df[i] / (rq * (1.0 + f[i] * f[i]).powf(1.5));
            -dcos / xi[i].sin()
        })
        .collect();
    let phase_at = |f: f64| rq * f.atan() / m - (m * f / rq).atan();
    let phase: Vec<f64> = f.iter().map(|f| phase_at(*f)).collect();

    let spec = IntrinsicSpec::new(
        ScalarFn::Table { values: xi, derivative: Some(dxi) },
        fraction.clone(),
        grid,
    )
    .with_inner_offset(sign / (rq * (1.0 + f[0] * f[0]).sqrt()))
    .with_theta0(sign * phase[0]);

    let amp: Vec<f64> = f.iter().map(|f| ((q + m * m * f * f) / (q * (1.0 + f * f))).sqrt()).collect();
    let h = grid.step();
    let dx: Vec<f64> = (0..nn).map(|i| amp[i] * phase[i].cos()).collect();
    let dy: Vec<f64> = (0..nn).map(|i| sign * amp[i] * phase[i].sin()).collect();
    let x = numerics::cumulative_values(&dx, h, 0.0)?;
    let y = numerics::cumulative_values(&dy, h, 0.0)?;
    let z = numerics::cumulative_values(&cos_xi, h, 0.0)?;
    let display = CurveSamples::from_components(grid, &x, &y, &z)?;

    let kappa: Vec<f64> = (0..nn).map(|i| df[i] / (m * (1.0 + f[i] * f[i]).powf(1.5))).collect();
    let tau: Vec<f64> = (0..nn).map(|i| f[i] * kappa[i]).collect();
    let generated = Generated {
        spec,
        display,
        kappa: GridFn::new(grid, kappa)?,
        tau: GridFn::new(grid, tau)?,
        sigma: GridFn::constant(grid, m)?,
    };
    Ok(SlantHelix { m, generated, phase: GridFn::new(grid, phase)? })
}
