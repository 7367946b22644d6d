//! Arc-length parametrized space curves built from an angular function and an
//! intrinsic fraction function (torsion over curvature).
//!
//! The crate is organised bottom-up:
//!
//! - [`exprlang`] parses, evaluates and differentiates scalar functions of `s`.
//! - [`numerics`] holds the uniform-grid calculus: cumulative quadrature,
//!   finite-difference stencils and a Serret–Frenet RK4 integrator.
//! - [`intrinsic`] checks the admissibility conditions, synthesizes the curve
//!   from its nested integrals, and evaluates the closed-form curvature,
//!   torsion and normal-indicatrix geodesic curvature.
//! - [`frenet`] recovers the same quantities numerically from positions only.
//! - [`families`] generates the constant-fraction helix, general helices from
//!   a prescribed curvature, and slant helices.
//!
//! Per-sample work goes through [`par`], which uses rayon when the `parallel`
//! feature is enabled (the default) and plain iterators otherwise.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod exprlang;
pub mod families;
pub mod frenet;
pub mod intrinsic;
pub mod numerics;
pub mod par;

pub use exprlang::{parse, ExprError, ScalarExpr};
pub use numerics::{CurveSamples, Frame, Grid, GridFn, Vec3};

/// Relative error with a unit floor on the scale: `|x - r| / max(|r|, 1)`.
pub fn rel_err(x: f64, reference: f64) -> f64 {
    (x - reference).abs() / reference.abs().max(1.0)
}

/// Median of finite values; `None` when there are none.
pub fn median(values: impl IntoIterator<Item = f64>) -> Option<f64> {
    let mut v: Vec<f64> = values.into_iter().filter(|x| x.is_finite()).collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { 0.5 * (v[m - 1] + v[m]) })
}
