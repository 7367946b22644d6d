//! JSON recipes.
//!
//! ```json
//! {
//!   "kind": "intrinsic",
//!   "grid": { "a": 0.6, "b": 1.6, "n": 4097 },
//!   "params": { "polar": "s", "fraction": "s", "inner_offset": 0.0 },
//!   "outputs": ["csv", "obj"]
//! }
//! ```
//!
//! Kinds and their params:
//!
//! - `intrinsic`: `polar`, `fraction` (expression string or
//!   `{"samples": [...], "derivative": [...]}`), optional `inner_offset`,
//!   `theta0`, `base_point`.
//! - `example_helix`: `phi0`.
//! - `general_helix`: `phi0` and exactly one of `kappa` (prescribed curvature)
//!   or `xi` (polar angle).
//! - `slant_helix`: `m`, `fraction`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use frenet_core::families::{self, ExampleHelix, GeneralHelix, HelixParams, HelixSource, SlantHelix, SlantParams};
use frenet_core::intrinsic::{IntrinsicSpec, ScalarFn};
use frenet_core::numerics::DEFAULT_N;
use frenet_core::{parse, Grid, ScalarExpr, Vec3};

use crate::CliError;

/// Environment variable holding the default sample count.
pub const DEFAULT_N_VAR: &str = "FRENET_DEFAULT_N";
/// Smallest accepted sample count.
pub const MIN_N: usize = 65;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Intrinsic,
    ExampleHelix,
    GeneralHelix,
    SlantHelix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    Csv,
    Obj,
    Gnuplot,
    Report,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub a: f64,
    pub b: f64,
    pub n: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum FnInput {
    Expr(String),
    Table {
        samples: Vec<f64>,
        #[serde(default)]
        derivative: Option<Vec<f64>>,
    },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntrinsicParams {
    pub polar: FnInput,
    pub fraction: FnInput,
    #[serde(default)]
    pub inner_offset: f64,
    #[serde(default)]
    pub theta0: f64,
    #[serde(default)]
    pub base_point: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExampleParams {
    pub phi0: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneralParams {
    pub phi0: f64,
    pub kappa: Option<String>,
    pub xi: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlantRecipeParams {
    pub m: f64,
    pub fraction: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Params {
    Intrinsic(IntrinsicParams),
    ExampleHelix(ExampleParams),
    GeneralHelix(GeneralParams),
    SlantHelix(SlantRecipeParams),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRecipe {
    kind: Kind,
    grid: GridSpec,
    #[serde(default)]
    params: serde_json::Value,
    #[serde(default)]
    outputs: Vec<Output>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Recipe {
    pub kind: Kind,
    pub grid: GridSpec,
    pub params: Params,
    pub outputs: Vec<Output>,
}

/// A recipe turned into a spec, plus the generator output for family kinds.
#[derive(Debug, Clone)]
pub struct Built {
    pub kind: Kind,
    pub spec: IntrinsicSpec,
    pub family: Option<Family>,
}

#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum Family {
    Example(ExampleHelix),
    General(GeneralHelix),
    Slant(SlantHelix),
}

impl Family {
    pub fn generated(&self) -> &families::Generated {
        match self {
            Family::Example(e) => &e.generated,
            Family::General(g) => &g.generated,
            Family::Slant(s) => &s.generated,
        }
    }
}

fn params<T: serde::de::DeserializeOwned>(kind: Kind, v: serde_json::Value) -> Result<T, CliError> {
    serde_json::from_value(v).map_err(|e| CliError::Recipe(format!("params for {kind:?}: {e}")))
}

fn expr(field: &str, text: &str) -> Result<ScalarExpr, CliError> {
    parse(text).map_err(|e| CliError::Expr(format!("{field} = {text:?}: {e}")))
}

fn scalar_fn(field: &str, input: &FnInput) -> Result<ScalarFn, CliError> {
    Ok(match input {
        FnInput::Expr(text) => ScalarFn::Expr(expr(field, text)?),
        FnInput::Table { samples, derivative } => {
            ScalarFn::Table { values: samples.clone(), derivative: derivative.clone() }
        }
    })
}

/// Sample count: the flag, then the recipe, then the environment, then the default.
pub fn resolve_n(flag: Option<usize>, recipe: Option<usize>) -> Result<usize, CliError> {
    let n = match flag.or(recipe) {
        Some(n) => n,
        None => match std::env::var(DEFAULT_N_VAR) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| CliError::Recipe(format!("{DEFAULT_N_VAR} = {v:?} is not a sample count")))?,
            Err(_) => DEFAULT_N,
        },
    };
    if n < MIN_N || n % 2 == 0 {
        return Err(CliError::Recipe(format!("grid n = {n} must be odd and at least {MIN_N}")));
    }
    Ok(n)
}

impl Recipe {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let raw: RawRecipe =
            serde_json::from_str(text).map_err(|e| CliError::Recipe(format!("invalid recipe: {e}")))?;
        let p = raw.params;
        let params = match raw.kind {
            Kind::Intrinsic => Params::Intrinsic(params(raw.kind, p)?),
            Kind::ExampleHelix => Params::ExampleHelix(params(raw.kind, p)?),
            Kind::GeneralHelix => Params::GeneralHelix(params(raw.kind, p)?),
            Kind::SlantHelix => Params::SlantHelix(params(raw.kind, p)?),
        };
        Ok(Self { kind: raw.kind, grid: raw.grid, params, outputs: raw.outputs })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Recipe(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn build(&self, n: usize) -> Result<Built, CliError> {
        let GridSpec { a, b, .. } = self.grid;
        let (spec, family) = match &self.params {
            Params::Intrinsic(p) => {
                let grid = Grid::new(a, b, n)?;
                let spec = IntrinsicSpec::new(scalar_fn("polar", &p.polar)?, scalar_fn("fraction", &p.fraction)?, grid)
                    .with_inner_offset(p.inner_offset)
                    .with_theta0(p.theta0)
                    .with_base_point(Vec3::from(p.base_point));
                (spec, None)
            }
            Params::ExampleHelix(p) => {
                let e = families::example_helix(p.phi0, a, b, n)?;
                (e.generated.spec.clone(), Some(Family::Example(e)))
            }
            Params::GeneralHelix(p) => {
                let source = match (&p.kappa, &p.xi) {
                    (Some(k), None) => HelixSource::Curvature(expr("kappa", k)?),
                    (None, Some(x)) => HelixSource::Angle(expr("xi", x)?),
                    _ => return Err(CliError::Recipe("general_helix needs exactly one of kappa or xi".into())),
                };
                let g = families::general_helix(&HelixParams { phi0: p.phi0, a, b, n, source })?;
                (g.generated.spec.clone(), Some(Family::General(g)))
            }
            Params::SlantHelix(p) => {
                let fraction = expr("fraction", &p.fraction)?;
                let s = families::slant_helix(&SlantParams { m: p.m, fraction, a, b, n })?;
                (s.generated.spec.clone(), Some(Family::Slant(s)))
            }
        };
        Ok(Built { kind: self.kind, spec, family })
    }
}
