//! Uniform-grid calculus: cumulative quadrature, finite-difference stencils,
//! and a Runge–Kutta integrator for the Serret–Frenet system.

mod diff;
mod grid;
mod ode;
mod quadrature;

pub use diff::{derivative, derivative_strided, finite_diff, finite_diff_points, stencil_weights};
pub use grid::{CurveSamples, Frame, Grid, GridFn, Vec3};
pub use ode::{integrate_frenet, FrenetTrajectory};
pub use quadrature::{cumulative_integral, cumulative_values, trapezoid_total};

/// Default sample count for curve grids.
pub const DEFAULT_N: usize = 4097;

/// Tolerance on frame orthonormality.
pub const FRAME_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericsError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid has {n} samples, at least {min} required")]
    GridTooSmall { n: usize, min: usize },
    #[error("{what}: expected {expected} samples, got {got}")]
    LengthMismatch { what: &'static str, expected: usize, got: usize },
    #[error("non-finite value at sample {index}")]
    NonFinite { index: usize },
    #[error("functions are sampled on different grids")]
    GridMismatch,
    #[error("frame is not orthonormal (deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },
    #[error("unsupported derivative order {0}")]
    UnsupportedOrder(usize),
}
