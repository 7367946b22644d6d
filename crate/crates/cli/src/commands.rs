use std::path::{Path, PathBuf};

use frenet_core::intrinsic::IntrinsicCurve;

use crate::csvio::{self, CurveRows};
use crate::export::{self, Format};
use crate::recipe::{self, Output, Recipe};
use crate::report::{self, AnalysisReport, VerifyReport};
use crate::CliError;

/// Writes the curve CSV for a recipe, plus any extra outputs it requests
/// (`.obj`, `.gp`, `.report.json` next to `out`).
pub fn generate(recipe_path: &Path, out: &Path, n: Option<usize>) -> Result<String, CliError> {
    let recipe = Recipe::load(recipe_path)?;
    let n = recipe::resolve_n(n, recipe.grid.n)?;
    let built = recipe.build(n)?;
    let c = IntrinsicCurve::new(&built.spec)?;
    let curve = c.synthesize()?;
    let frames = c.closed_frames()?;
    let kappa = c.closed_curvature()?;
    let tau = c.closed_torsion()?;
    let sigma = c.closed_sigma()?;
    let text = csvio::render(&CurveRows {
        curve: &curve,
        frames: &frames,
        kappa: kappa.values(),
        tau: tau.values(),
        sigma: sigma.values(),
        sigma_source: "closed",
    })?;
    csvio::write_file(out, &text)?;

    let mut written = vec![out.to_path_buf()];
    let needs_table = recipe.outputs.iter().any(|o| matches!(o, Output::Obj | Output::Gnuplot));
    let table = if needs_table { Some(csvio::parse(&text)?) } else { None };
    for o in &recipe.outputs {
        let (path, contents) = match (o, &table) {
            (Output::Csv, _) => continue,
            (Output::Obj, Some(t)) => (out.with_extension("obj"), export::obj(t)),
            (Output::Gnuplot, Some(t)) => (out.with_extension("gp"), export::gnuplot(t, out)),
            (Output::Report, _) => {
                let r = report::verify(&built)?;
                (sibling(out, "report.json"), to_json(&r)?)
            }
            (_, None) => unreachable!("table parsed when obj or gnuplot is requested"),
        };
        csvio::write_file(&path, &contents)?;
        written.push(path);
    }
    let names: Vec<String> = written.iter().map(|p| p.display().to_string()).collect();
    Ok(format!("wrote {} rows to {}", curve.points().len(), names.join(", ")))
}

fn sibling(out: &Path, ext: &str) -> PathBuf {
    out.with_extension(ext)
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value).map(|s| s + "\n").map_err(|e| CliError::Output(e.to_string()))
}

fn emit(json: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => csvio::write_file(p, json),
        None => stdout(json),
    }
}

/// Writes to stdout; a closed pipe is not an error.
fn stdout(text: &str) -> Result<(), CliError> {
    use std::io::Write;
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Output(e.to_string())),
        _ => Ok(()),
    }
}

fn print_checks(checks: &[report::Check]) -> Result<(), CliError> {
    let text: String = checks.iter().map(|c| c.line() + "\n").collect();
    stdout(&text)
}

pub fn analyze(input: &Path, json: Option<&Path>, tol_rel: f64) -> Result<AnalysisReport, CliError> {
    let table = csvio::read_file(input)?;
    let r = report::analyze(&table, tol_rel)?;
    let text = to_json(&r)?;
    emit(&text, json)?;
    if json.is_some() {
        print_checks(&r.checks)?;
    }
    Ok(r)
}

pub fn verify(recipe_path: &Path, json: Option<&Path>) -> Result<VerifyReport, CliError> {
    let recipe = Recipe::load(recipe_path)?;
    let n = recipe::resolve_n(None, recipe.grid.n)?;
    let built = recipe.build(n)?;
    let r = match report::verify(&built) {
        Ok(r) => r,
        Err(CliError::Domain(d)) => {
            if let Some(p) = json {
                let summary = report::DomainSummary::from(d.as_ref());
                let body = serde_json::json!({ "kind": built.kind, "n": n, "domain": summary, "passed": false });
                csvio::write_file(p, &to_json(&body)?)?;
            }
            return Err(CliError::Domain(d));
        }
        Err(e) => return Err(e),
    };
    print_checks(&r.checks)?;
    if let Some(p) = json {
        csvio::write_file(p, &to_json(&r)?)?;
    }
    Ok(r)
}

pub fn export(input: &Path, format: &str, out: &Path) -> Result<(), CliError> {
    let format: Format = format.parse()?;
    let table = csvio::read_file(input)?;
    let contents = match format {
        Format::Obj => export::obj(&table),
        Format::Gnuplot => export::gnuplot(&table, input),
    };
    csvio::write_file(out, &contents)
}
