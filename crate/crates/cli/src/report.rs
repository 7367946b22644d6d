//! Analysis and verification reports.

use serde::Serialize;

use frenet_core::frenet::{self, FrenetApparatus, PartialFn};
use frenet_core::intrinsic::{DomainReport, IntrinsicCurve};
use frenet_core::numerics::integrate_frenet;
use frenet_core::{median, rel_err, CurveSamples, Grid, GridFn};

use crate::csvio::CurveTable;
use crate::recipe::{Built, Family, Kind};
use crate::CliError;

/// Fraction of samples dropped at each end for closed-vs-numeric comparisons.
pub const EDGE_TRIM: f64 = 0.02;
pub const UNIT_SPEED_TOL: f64 = 1e-6;
pub const CLOSED_NUMERIC_TOL: f64 = 1e-3;
pub const FRACTION_IDENTITY_TOL: f64 = 1e-12;
pub const SIGMA_CONSISTENCY_TOL: f64 = 1e-6;
pub const CLOSURE_TOL: f64 = 1e-4;
pub const CONSTANCY_TOL: f64 = 1e-3;
pub const COHERENCE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn at_most(name: &str, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value, tolerance, passed: value <= tolerance, note: None }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        format!("{verdict} {:<24} {:.3e} <= {:.0e}", self.name, self.value, self.tolerance)
    }
}

fn max_over(range: std::ops::Range<usize>, f: impl Fn(usize) -> Option<f64>) -> f64 {
    range
        .map(|i| f(i).unwrap_or(f64::NAN))
        .fold(0.0, |m: f64, v| if v.is_nan() || m.is_nan() { f64::NAN } else { m.max(v) })
}

/// Max deviation from the median over the given samples, and the median.
fn constancy(values: &[f64]) -> (f64, f64) {
    let Some(med) = median(values.iter().copied()) else {
        return (f64::NAN, f64::NAN);
    };
    (values.iter().map(|v| (v - med).abs()).fold(0.0, f64::max), med)
}

pub fn speed_deviation(c: &CurveSamples) -> Result<f64, CliError> {
    let v = FrenetApparatus::speed(c).map_err(CliError::analysis)?;
    Ok(v.values().iter().map(|s| (s - 1.0).abs()).fold(0.0, f64::max))
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisTable {
    pub s: Vec<f64>,
    pub kappa: Vec<f64>,
    pub tau: Vec<Option<f64>>,
    pub fraction: Vec<Option<f64>>,
    pub sigma: Vec<Option<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisSummary {
    pub n: usize,
    pub max_speed_deviation: f64,
    pub kappa_median: Option<f64>,
    pub tau_median: Option<f64>,
    pub fraction_median: Option<f64>,
    pub sigma_median: Option<f64>,
    /// Over the interior samples.
    pub fraction_max_deviation: Option<f64>,
    pub sigma_max_deviation: Option<f64>,
    pub kappa_vs_column_max_rel: Option<f64>,
    pub tau_vs_column_max_rel: Option<f64>,
    pub tau_gaps: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub summary: AnalysisSummary,
    pub checks: Vec<Check>,
    pub table: AnalysisTable,
}

impl AnalysisReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn interior_values(f: &[Option<f64>], grid: &Grid) -> Vec<f64> {
    grid.interior(EDGE_TRIM).filter_map(|i| f[i]).collect()
}

/// Numeric Frenet apparatus of a CSV curve, compared against its stored columns.
pub fn analyze(table: &CurveTable, tol_rel: f64) -> Result<AnalysisReport, CliError> {
    let curve = &table.curve;
    let grid = *curve.grid();
    let app = FrenetApparatus::from_curve(curve).map_err(|e| CliError::Csv(e.to_string()))?;
    let sigma: Vec<Option<f64>> = match &app.sigma {
        Some(s) => s.values().iter().copied().map(Some).collect(),
        None => vec![None; grid.len()],
    };
    let inner = grid.interior(EDGE_TRIM);

    let vs_column = |name: &str, numeric: &dyn Fn(usize) -> Option<f64>| {
        table.column(name).map(|col| max_over(inner.clone(), |i| Some(rel_err(numeric(i)?, col[i]?))))
    };
    let kappa_rel = vs_column("kappa", &|i| Some(app.kappa.at(i)));
    let tau_rel = vs_column("tau", &|i| app.tau.get(i));

    let fractions = interior_values(app.fraction.values(), &grid);
    let sigmas = interior_values(&sigma, &grid);
    let (fdev, fmed) = constancy(&fractions);
    let (sdev, smed) = constancy(&sigmas);
    let speed = speed_deviation(curve)?;

    let mut checks = vec![Check::at_most("unit_speed", speed, UNIT_SPEED_TOL)];
    if let Some(v) = kappa_rel {
        checks.push(Check::at_most("kappa_vs_csv", v, tol_rel));
    }
    if let Some(v) = tau_rel {
        checks.push(Check::at_most("tau_vs_csv", v, tol_rel));
    }
    let finite = |v: f64| v.is_finite().then_some(v);
    let summary = AnalysisSummary {
        n: grid.len(),
        max_speed_deviation: speed,
        kappa_median: median(app.kappa.values().iter().copied()),
        tau_median: median(app.tau.values().iter().flatten().copied()),
        fraction_median: finite(fmed),
        sigma_median: finite(smed),
        fraction_max_deviation: finite(fdev),
        sigma_max_deviation: finite(sdev),
        kappa_vs_column_max_rel: kappa_rel,
        tau_vs_column_max_rel: tau_rel,
        tau_gaps: app.tau.gaps().len(),
    };
    let table = AnalysisTable {
        s: grid.samples(),
        kappa: app.kappa.values().to_vec(),
        tau: app.tau.values().to_vec(),
        fraction: app.fraction.values().to_vec(),
        sigma,
    };
    Ok(AnalysisReport { summary, checks, table })
}

#[derive(Debug, Clone, Serialize)]
pub struct DomainSummary {
    pub valid: bool,
    pub min_monotone_margin: f64,
    pub min_domain_margin: f64,
    pub first_violation_s: Option<f64>,
    pub violation: Option<String>,
}

impl From<&DomainReport> for DomainSummary {
    fn from(r: &DomainReport) -> Self {
        Self {
            valid: r.valid,
            min_monotone_margin: r.min_monotone_margin,
            min_domain_margin: r.min_domain_margin,
            first_violation_s: r.first_violation_s,
            violation: r.violation.map(|v| v.to_string()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub kind: Kind,
    pub n: usize,
    pub interval: [f64; 2],
    pub domain: DomainSummary,
    pub checks: Vec<Check>,
    pub passed: bool,
}

fn sub_grid(grid: &Grid, range: &std::ops::Range<usize>) -> Result<Grid, CliError> {
    Grid::new(grid.s(range.start), grid.s(range.end - 1), range.len()).map_err(CliError::analysis)
}

fn restrict(f: &GridFn, grid: Grid, range: &std::ops::Range<usize>) -> Result<GridFn, CliError> {
    GridFn::new(grid, f.values()[range.clone()].to_vec()).map_err(CliError::analysis)
}

/// Runs the invariant suite on a built recipe.
pub fn verify(built: &Built) -> Result<VerifyReport, CliError> {
    let c = IntrinsicCurve::new(&built.spec)?;
    let grid = c.grid();
    let curve = c.synthesize()?;
    let kappa = c.closed_curvature()?;
    let tau = c.closed_torsion()?;
    let inner = grid.interior(EDGE_TRIM);
    let mut checks = Vec::new();

    checks.push(Check::at_most("unit_speed", speed_deviation(&curve)?, UNIT_SPEED_TOL));

    let nk = frenet::numeric_kappa(&curve).map_err(CliError::analysis)?;
    let nt = frenet::numeric_tau(&curve).map_err(CliError::analysis)?;
    checks.push(Check::at_most(
        "kappa_closed_vs_numeric",
        max_over(inner.clone(), |i| Some(rel_err(nk.at(i), kappa.at(i)))),
        CLOSED_NUMERIC_TOL,
    ));
    checks.push(Check::at_most(
        "tau_closed_vs_numeric",
        max_over(inner.clone(), |i| Some(rel_err(nt.get(i)?, tau.at(i)))),
        CLOSED_NUMERIC_TOL,
    ));

    let x = c.inputs();
    let identity = max_over(0..grid.len(), |i| {
        let k = kappa.at(i);
        Some(if k > frenet::EPS_KAPPA { (tau.at(i) / k - x.fraction[i]).abs() } else { 0.0 })
    });
    checks.push(Check::at_most("fraction_identity", identity, FRACTION_IDENTITY_TOL));

    let sub = sub_grid(&grid, &inner)?;
    let closed_sigma = c.closed_sigma()?;
    let from_kt = frenet::sigma_from_kappa_tau(&restrict(&kappa, sub, &inner)?, &restrict(&tau, sub, &inner)?)
        .map_err(CliError::analysis)?;
    checks.push(Check::at_most(
        "sigma_consistency",
        max_over(0..sub.len(), |j| Some(rel_err(closed_sigma.get(inner.start + j)?, from_kt.at(j)))),
        SIGMA_CONSISTENCY_TOL,
    ));

    let frames = c.closed_frames()?;
    let start = frames.iter().position(Option::is_some).ok_or_else(|| CliError::Analysis("no defined frame".into()))?;
    let tail = start..grid.len();
    let tail_grid = sub_grid(&grid, &tail)?;
    let traj = integrate_frenet(
        &restrict(&kappa, tail_grid, &tail)?,
        &restrict(&tau, tail_grid, &tail)?,
        &frames[start].expect("defined frame"),
        curve.points()[start],
    )
    .map_err(CliError::analysis)?;
    let closure = traj
        .curve
        .points()
        .iter()
        .zip(&curve.points()[start..])
        .map(|(p, q)| (p - q).norm())
        .fold(0.0, f64::max);
    checks.push(Check::at_most("oracle_closure", closure, CLOSURE_TOL));

    if let Some(family) = &built.family {
        family_checks(family, &c, &curve, &mut checks)?;
    }

    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport {
        kind: built.kind,
        n: grid.len(),
        interval: [grid.a(), grid.b()],
        domain: c.report().into(),
        checks,
        passed,
    })
}

fn numeric_fraction(curve: &CurveSamples) -> Result<PartialFn, CliError> {
    Ok(FrenetApparatus::from_curve(curve).map_err(CliError::analysis)?.fraction)
}

fn family_checks(
    family: &Family,
    c: &IntrinsicCurve,
    curve: &CurveSamples,
    checks: &mut Vec<Check>,
) -> Result<(), CliError> {
    let grid = c.grid();
    let inner = grid.interior(EDGE_TRIM);
    let generated = family.generated();
    checks.push(Check::at_most("display_coherence", curve.max_distance(&generated.display), COHERENCE_TOL));

    let lancret = |phi0: f64, checks: &mut Vec<Check>| -> Result<(), CliError> {
        let f = interior_values(numeric_fraction(curve)?.values(), &grid);
        let (dev, med) = constancy(&f);
        checks.push(Check::at_most("fraction_constancy", dev, CONSTANCY_TOL));
        checks.push(
            Check::at_most("fraction_value", (med - phi0).abs(), CONSTANCY_TOL)
                .with_note(format!("median {med:.9}, signed phi0 {phi0}, |phi0| {}", phi0.abs())),
        );
        Ok(())
    };

    match family {
        Family::Example(e) => lancret(e.phi0, checks)?,
        Family::General(g) => {
            lancret(g.phi0, checks)?;
            let nk = frenet::numeric_kappa(curve).map_err(CliError::analysis)?;
            checks.push(Check::at_most(
                "kappa_prescribed",
                max_over(inner.clone(), |i| Some(rel_err(nk.at(i), generated.kappa.at(i)))),
                CLOSED_NUMERIC_TOL,
            ));
            if let Some(classic) = &g.classic_x {
                let d = generated.display.points().iter().zip(classic).map(|(p, x)| (p.x - x).abs()).fold(0.0, f64::max);
                checks.push(Check::at_most("classic_form", d, COHERENCE_TOL));
            }
        }
        Family::Slant(s) => {
            let sigma = frenet::numeric_sigma(curve).map_err(CliError::analysis)?;
            let values: Vec<f64> = inner.clone().map(|i| sigma.at(i)).collect();
            let (dev, med) = constancy(&values);
            checks.push(Check::at_most("sigma_constancy", dev, CONSTANCY_TOL));
            checks.push(
                Check::at_most("sigma_value", (med - s.m).abs(), CONSTANCY_TOL).with_note(format!("median {med:.9}, m {}", s.m)),
            );
        }
    }
    Ok(())
}
