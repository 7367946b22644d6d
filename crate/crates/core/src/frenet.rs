//! Numeric Frenet apparatus of sampled curves.
//!
//! Everything here works from positions alone via fourth-order finite
//! differences, and serves as the independent check on the closed forms in
//! [`crate::intrinsic`].

use crate::numerics::{self, CurveSamples, Frame, Grid, GridFn, NumericsError, Vec3};
use crate::par;

/// Curvature below which torsion and the normal are undefined.
pub const EPS_KAPPA: f64 = 1e-6;
/// Speed below which the parametrization is degenerate.
pub const MIN_SPEED: f64 = 1e-9;
/// Sample spacing used by [`numeric_sigma`] is at least `(b - a) / SIGMA_CELLS`.
pub const SIGMA_CELLS: usize = 1024;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FrenetError {
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("degenerate parametrization at s = {s} (|c'| < 1e-9)")]
    Degenerate { index: usize, s: f64 },
    #[error("curvature below 1e-6 at s = {s}")]
    FlatPoint { index: usize, s: f64 },
}

/// Samples that may be undefined at some points.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialFn {
    grid: Grid,
    values: Vec<Option<f64>>,
}

impl PartialFn {
    pub fn new(grid: Grid, values: Vec<Option<f64>>) -> Result<Self, NumericsError> {
        if values.len() != grid.len() {
            return Err(NumericsError::LengthMismatch {
                what: "partial function",
                expected: grid.len(),
                got: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    pub fn get(&self, i: usize) -> Option<f64> {
        self.values[i]
    }

    /// Indices of undefined samples.
    pub fn gaps(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&i| self.values[i].is_none()).collect()
    }

    /// The full function, or `None` if any sample is missing.
    pub fn complete(&self) -> Option<GridFn> {
        let v: Option<Vec<f64>> = self.values.iter().copied().collect();
        GridFn::new(self.grid, v?).ok()
    }
}

impl From<GridFn> for PartialFn {
    fn from(f: GridFn) -> Self {
        let grid = *f.grid();
        Self { grid, values: f.into_values().into_iter().map(Some).collect() }
    }
}

struct Derivatives {
    d1: Vec<Vec3>,
    d2: Vec<Vec3>,
    d3: Vec<Vec3>,
}

fn derivatives(c: &CurveSamples, stride: usize) -> Result<Derivatives, FrenetError> {
    let h = c.grid().step();
    let d1 = numerics::finite_diff_points(c.points(), h, 1, stride)?;
    if let Some(index) = d1.iter().position(|v| v.norm() < MIN_SPEED) {
        return Err(FrenetError::Degenerate { index, s: c.grid().s(index) });
    }
    let d2 = numerics::finite_diff_points(c.points(), h, 2, stride)?;
    let d3 = numerics::finite_diff_points(c.points(), h, 3, stride)?;
    Ok(Derivatives { d1, d2, d3 })
}

impl Derivatives {
    fn kappa(&self, i: usize) -> f64 {
        self.d1[i].cross(&self.d2[i]).norm() / self.d1[i].norm().powi(3)
    }

    fn tau(&self, i: usize) -> Option<f64> {
        if self.kappa(i) < EPS_KAPPA {
            return None;
        }
        let w = self.d1[i].cross(&self.d2[i]);
        Some(w.dot(&self.d3[i]) / w.norm_squared())
    }

    fn frame(&self, i: usize) -> Option<Frame> {
        if self.kappa(i) < EPS_KAPPA {
            return None;
        }
        Frame::from_tangent_normal(self.d1[i], self.d2[i])
    }
}

/// `κ = |c' × c''| / |c'|³`
pub fn numeric_kappa(c: &CurveSamples) -> Result<GridFn, FrenetError> {
    let d = derivatives(c, 1)?;
    Ok(GridFn::new(*c.grid(), par::map_indices(c.grid().len(), |i| d.kappa(i)))?)
}

/// `τ = (c' × c'')·c''' / |c' × c''|²`, undefined where `κ < EPS_KAPPA`.
pub fn numeric_tau(c: &CurveSamples) -> Result<PartialFn, FrenetError> {
    let d = derivatives(c, 1)?;
    Ok(PartialFn::new(*c.grid(), par::map_indices(c.grid().len(), |i| d.tau(i)))?)
}

/// Frenet frames at every sample; fails at the first flat point.
pub fn frames(c: &CurveSamples) -> Result<Vec<Frame>, FrenetError> {
    let d = derivatives(c, 1)?;
    let fs = par::map_indices(c.grid().len(), |i| d.frame(i));
    fs.into_iter()
        .enumerate()
        .map(|(index, f)| f.ok_or(FrenetError::FlatPoint { index, s: c.grid().s(index) }))
        .collect()
}

fn check_kappa(kappa: &GridFn) -> Result<(), FrenetError> {
    match kappa.values().iter().position(|k| !(*k >= EPS_KAPPA)) {
        Some(index) => Err(FrenetError::FlatPoint { index, s: kappa.grid().s(index) }),
        None => Ok(()),
    }
}

fn sigma_with_stride(kappa: &GridFn, tau: &GridFn, stride: usize) -> Result<GridFn, FrenetError> {
    if kappa.grid() != tau.grid() {
        return Err(NumericsError::GridMismatch.into());
    }
    check_kappa(kappa)?;
    let grid = *kappa.grid();
    let (k, t) = (kappa.values(), tau.values());
    let fraction: Vec<f64> = k.iter().zip(t).map(|(k, t)| t / k).collect();
    let df = numerics::derivative_strided(&fraction, grid.step(), 1, stride)?;
    let sigma = par::map_indices(grid.len(), |i| {
        let f = fraction[i];
        df[i] / ((1.0 + f * f).powf(1.5) * k[i])
    });
    Ok(GridFn::new(grid, sigma)?)
}

/// Geodesic curvature of the normal indicatrix,
/// `σ = (τ/κ)' / ((1 + (τ/κ)²)^{3/2} κ)`, with `(τ/κ)'` by finite differences.
pub fn sigma_from_kappa_tau(kappa: &GridFn, tau: &GridFn) -> Result<GridFn, FrenetError> {
    sigma_with_stride(kappa, tau, 1)
}

/// The same quantity written as `κ² / (κ² + τ²)^{3/2} · (τ/κ)'`.
pub fn sigma_curvature_form(kappa: &GridFn, tau: &GridFn) -> Result<GridFn, FrenetError> {
    if kappa.grid() != tau.grid() {
        return Err(NumericsError::GridMismatch.into());
    }
    check_kappa(kappa)?;
    let grid = *kappa.grid();
    let (k, t) = (kappa.values(), tau.values());
    let fraction: Vec<f64> = k.iter().zip(t).map(|(k, t)| t / k).collect();
    let df = numerics::derivative(&fraction, grid.step(), 1)?;
    let sigma = par::map_indices(grid.len(), |i| {
        let (k, t) = (k[i], t[i]);
        k * k / (k * k + t * t).powf(1.5) * df[i]
    });
    Ok(GridFn::new(grid, sigma)?)
}

/// Stride used by [`numeric_sigma`] on a grid with `n` samples.
pub fn sigma_stride(n: usize) -> usize {
    ((n - 1) / SIGMA_CELLS).max(1)
}

/// σ straight from positions. Third derivatives amplify round-off, so on fine
/// grids each residue class of [`sigma_stride`] is differentiated separately.
pub fn numeric_sigma(c: &CurveSamples) -> Result<GridFn, FrenetError> {
    let grid = *c.grid();
    let stride = sigma_stride(grid.len());
    let d = derivatives(c, stride)?;
    let kappa = GridFn::new(grid, par::map_indices(grid.len(), |i| d.kappa(i)))?;
    check_kappa(&kappa)?;
    let tau = par::map_indices(grid.len(), |i| d.tau(i).unwrap_or(0.0));
    sigma_with_stride(&kappa, &GridFn::new(grid, tau)?, stride)
}

/// κ, τ, τ/κ, σ and frames of a sampled curve.
#[derive(Debug, Clone)]
pub struct FrenetApparatus {
    pub grid: Grid,
    pub kappa: GridFn,
    pub tau: PartialFn,
    pub fraction: PartialFn,
    /// Only present when `κ >= EPS_KAPPA` at every sample.
    pub sigma: Option<GridFn>,
    pub frames: Vec<Option<Frame>>,
}

impl FrenetApparatus {
    pub fn from_curve(c: &CurveSamples) -> Result<Self, FrenetError> {
        let grid = *c.grid();
        let n = grid.len();
        let d = derivatives(c, 1)?;
        let kappa = GridFn::new(grid, par::map_indices(n, |i| d.kappa(i)))?;
        let tau = PartialFn::new(grid, par::map_indices(n, |i| d.tau(i)))?;
        let fraction = PartialFn::new(
            grid,
            (0..n).map(|i| tau.get(i).map(|t| t / kappa.at(i))).collect(),
        )?;
        let frames = par::map_indices(n, |i| d.frame(i));
        let sigma = if tau.gaps().is_empty() { Some(numeric_sigma(c)?) } else { None };
        Ok(Self { grid, kappa, tau, fraction, sigma, frames })
    }

    pub fn speed(c: &CurveSamples) -> Result<GridFn, FrenetError> {
        let d1 = numerics::finite_diff_points(c.points(), c.grid().step(), 1, 1)?;
        Ok(GridFn::new(*c.grid(), d1.iter().map(|v| v.norm()).collect())?)
    }
}
