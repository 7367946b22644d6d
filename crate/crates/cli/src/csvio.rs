//! Curve CSV files.
//!
//! An optional comment line `# sigma: closed|numeric` precedes the header.
//! Values use 17 significant digits; an empty field marks an undefined value.

use std::collections::BTreeMap;
use std::path::Path;

use frenet_core::{CurveSamples, Frame, Grid, Vec3};

use crate::CliError;

pub const HEADER: [&str; 16] =
    ["s", "x", "y", "z", "tx", "ty", "tz", "nx", "ny", "nz", "bx", "by", "bz", "kappa", "tau", "sigma"];

/// Largest accepted deviation of a sample spacing from the mean spacing, relative.
pub const SPACING_TOL: f64 = 1e-9;

/// Rows of a generated curve.
pub struct CurveRows<'a> {
    pub curve: &'a CurveSamples,
    pub frames: &'a [Option<Frame>],
    pub kappa: &'a [f64],
    pub tau: &'a [f64],
    pub sigma: &'a [Option<f64>],
    pub sigma_source: &'a str,
}

fn field(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| format!("{x:.16e}"))
}

pub fn render(rows: &CurveRows<'_>) -> Result<String, CliError> {
    let mut out = format!("# sigma: {}\n", rows.sigma_source).into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(HEADER).map_err(|e| CliError::Output(e.to_string()))?;
        let grid = rows.curve.grid();
        for (i, p) in rows.curve.points().iter().enumerate() {
            let f = rows.frames[i];
            let vec = |pick: fn(&Frame) -> Vec3| -> [Option<f64>; 3] {
                match f.as_ref().map(pick) {
                    Some(v) => [Some(v.x), Some(v.y), Some(v.z)],
                    None => [None; 3],
                }
            };
            let mut rec = vec![Some(grid.s(i)), Some(p.x), Some(p.y), Some(p.z)];
            rec.extend(vec(|f| f.t));
            rec.extend(vec(|f| f.n));
            rec.extend(vec(|f| f.b));
            rec.extend([Some(rows.kappa[i]), Some(rows.tau[i]), rows.sigma[i]]);
            w.write_record(rec.into_iter().map(field)).map_err(|e| CliError::Output(e.to_string()))?;
        }
        w.flush().map_err(|e| CliError::Output(e.to_string()))?;
    }
    String::from_utf8(out).map_err(|e| CliError::Output(e.to_string()))
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Output(format!("cannot write {}: {e}", path.display())))
}

/// A curve read back from CSV.
#[derive(Debug, Clone)]
pub struct CurveTable {
    pub sigma_source: Option<String>,
    pub header: Vec<String>,
    pub curve: CurveSamples,
    /// Columns other than `s, x, y, z`.
    pub columns: BTreeMap<String, Vec<Option<f64>>>,
}

impl CurveTable {
    pub fn column(&self, name: &str) -> Option<&[Option<f64>]> {
        self.columns.get(name).map(Vec::as_slice)
    }
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Csv(msg.into())
}

pub fn parse(text: &str) -> Result<CurveTable, CliError> {
    let sigma_source = text
        .lines()
        .take_while(|l| l.starts_with('#'))
        .find_map(|l| l.trim_start_matches('#').trim().strip_prefix("sigma:").map(|v| v.trim().to_string()));
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header: Vec<String> = r.headers().map_err(|e| bad(e.to_string()))?.iter().map(str::to_string).collect();
    let find = |name: &str| header.iter().position(|h| h == name);
    let (Some(is), Some(ix), Some(iy), Some(iz)) = (find("s"), find("x"), find("y"), find("z")) else {
        return Err(bad("header must contain s, x, y, z"));
    };

    let mut cols: Vec<Vec<Option<f64>>> = vec![Vec::new(); header.len()];
    for (row, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        for (j, cell) in rec.iter().enumerate() {
            let v = if cell.is_empty() {
                None
            } else {
                let v: f64 = cell
                    .parse()
                    .map_err(|_| bad(format!("row {}: {:?} is not a number", row + 1, cell)))?;
                if !v.is_finite() {
                    return Err(bad(format!("row {}: non-finite value", row + 1)));
                }
                Some(v)
            };
            cols[j].push(v);
        }
    }
    let n = cols[is].len();
    if n == 0 {
        return Err(bad("no data rows"));
    }
    let required = |j: usize, name: &str| -> Result<Vec<f64>, CliError> {
        cols[j]
            .iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| bad(format!("row {}: missing {name}", i + 1))))
            .collect()
    };
    let s = required(is, "s")?;
    let grid = uniform_grid(&s)?;
    let (x, y, z) = (required(ix, "x")?, required(iy, "y")?, required(iz, "z")?);
    let curve = CurveSamples::from_components(grid, &x, &y, &z).map_err(|e| bad(e.to_string()))?;
    let columns = header
        .clone()
        .into_iter()
        .enumerate()
        .filter(|(j, _)| ![is, ix, iy, iz].contains(j))
        .map(|(j, h)| (h, std::mem::take(&mut cols[j])))
        .collect();
    Ok(CurveTable { sigma_source, header, curve, columns })
}

/// Checks that `s` is increasing with constant spacing.
pub fn uniform_grid(s: &[f64]) -> Result<Grid, CliError> {
    let n = s.len();
    if n < Grid::MIN_SAMPLES {
        return Err(bad(format!("{n} rows, at least {} required", Grid::MIN_SAMPLES)));
    }
    let h = (s[n - 1] - s[0]) / (n - 1) as f64;
    if !(h > 0.0) {
        return Err(bad("s must be increasing"));
    }
    for (i, w) in s.windows(2).enumerate() {
        let dev = ((w[1] - w[0]) - h).abs() / h;
        if dev > SPACING_TOL {
            return Err(bad(format!(
                "non-uniform grid at row {}: spacing {} deviates from {h} by {dev:e} (relative)",
                i + 2,
                w[1] - w[0]
            )));
        }
    }
    Grid::new(s[0], s[n - 1], n).map_err(|e| bad(e.to_string()))
}

pub fn read_file(path: &Path) -> Result<CurveTable, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| bad(format!("cannot read {}: {e}", path.display())))?;
    parse(&text)
}
