//! OBJ polylines and gnuplot scripts.

use std::fmt::Write as _;
use std::path::Path;

use crate::csvio::CurveTable;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Obj,
    Gnuplot,
}

impl std::str::FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "obj" => Ok(Format::Obj),
            "gnuplot" => Ok(Format::Gnuplot),
            other => Err(CliError::UnknownFormat(other.to_string())),
        }
    }
}

/// `v x y z` per sample followed by a single `l 1 2 … n` line.
pub fn obj(table: &CurveTable) -> String {
    let pts = table.curve.points();
    let mut out = String::with_capacity(pts.len() * 64);
    for p in pts {
        let _ = writeln!(out, "v {:.16e} {:.16e} {:.16e}", p.x, p.y, p.z);
    }
    out.push('l');
    for i in 1..=pts.len() {
        let _ = write!(out, " {i}");
    }
    out.push('\n');
    out
}

fn quote(path: &Path) -> String {
    path.display().to_string().replace('\\', "\\\\").replace('\'', "\\'")
}

/// Script plotting the space curve and, when present, the κ, τ, σ columns of `csv_path`.
pub fn gnuplot(table: &CurveTable, csv_path: &Path) -> String {
    let data = quote(csv_path);
    let col = |name: &str| table.header.iter().position(|h| h == name).map(|i| i + 1);
    let (s, x, y, z) = (col("s").unwrap_or(1), col("x").unwrap_or(2), col("y").unwrap_or(3), col("z").unwrap_or(4));
    let mut out = String::new();
    let _ = writeln!(out, "set datafile separator ','");
    let _ = writeln!(out, "set datafile commentschars '#'");
    let _ = writeln!(out, "set key autotitle columnhead");
    let _ = writeln!(out, "set title 'curve ({} samples)'", table.curve.points().len());
    let _ = writeln!(out, "set xlabel 'x'; set ylabel 'y'; set zlabel 'z'");
    let _ = writeln!(out, "set view equal xyz");
    let _ = writeln!(out, "splot '{data}' using {x}:{y}:{z} with lines title 'curve'");
    let profiles: Vec<(&str, usize)> =
        ["kappa", "tau", "sigma"].iter().filter_map(|n| col(n).map(|c| (*n, c))).collect();
    if !profiles.is_empty() {
        let _ = writeln!(out, "pause mouse close");
        let _ = writeln!(out, "set multiplot layout {},1", profiles.len());
        for (name, c) in &profiles {
            let _ = writeln!(out, "set xlabel 's'; set ylabel '{name}'");
            let _ = writeln!(out, "plot '{data}' using {s}:{c} with lines title '{name}'");
        }
        let _ = writeln!(out, "unset multiplot");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csvio;

    #[test]
    fn formats() {
        assert_eq!("obj".parse::<Format>().unwrap(), Format::Obj);
        assert!(matches!("svg".parse::<Format>(), Err(CliError::UnknownFormat(_))));
    }

    #[test]
    fn obj_structure() {
        let t = csvio::parse("s,x,y,z\n0,0,0,0\n1,1,0,0\n2,2,0,0\n3,3,0,0\n4,4,0,0\n").unwrap();
        let text = obj(&t);
        assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 5);
        assert_eq!(text.lines().last().unwrap(), "l 1 2 3 4 5");
    }

    #[test]
    fn gnuplot_uses_header_columns() {
        let t = csvio::parse("s,x,y,z,kappa\n0,0,0,0,1\n1,1,0,0,1\n2,2,0,0,1\n3,3,0,0,1\n4,4,0,0,1\n").unwrap();
        let script = gnuplot(&t, Path::new("data/c.csv"));
        assert!(script.contains("splot 'data/c.csv' using 2:3:4"));
        assert!(script.contains("using 1:5 with lines title 'kappa'"));
        assert!(!script.contains("sigma"));
    }
}
