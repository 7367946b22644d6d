use super::{Grid, GridFn, NumericsError};

/// Running integral `offset + ∫_a^{s_i} f ds` of uniformly spaced samples.
///
/// Each interval `[s_i, s_{i+1}]` is integrated exactly for the cubic through
/// the four nearest samples: `h/24 (-f_{i-1} + 13 f_i + 13 f_{i+1} - f_{i+2})`
/// in the interior and `h/24 (9 f_i + 19 f_{i+1} - 5 f_{i+2} + f_{i+3})` (mirrored)
/// on the two boundary intervals. Fourth-order.
pub fn cumulative_values(values: &[f64], h: f64, offset: f64) -> Result<Vec<f64>, NumericsError> {
    let n = values.len();
    if n < 4 {
        return Err(NumericsError::GridTooSmall { n, min: 4 });
    }
    let f = values;
    let c = h / 24.0;
    let increments = crate::par::map_indices(n - 1, |i| {
        if i == 0 {
            c * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3])
        } else if i == n - 2 {
            c * (9.0 * f[n - 1] + 19.0 * f[n - 2] - 5.0 * f[n - 3] + f[n - 4])
        } else {
            c * (-f[i - 1] + 13.0 * f[i] + 13.0 * f[i + 1] - f[i + 2])
        }
    });
    let mut out = Vec::with_capacity(n);
    let mut acc = offset;
    out.push(acc);
    for inc in increments {
        acc += inc;
        out.push(acc);
    }
    Ok(out)
}

/// Cumulative integral of a grid function; `result[0] == offset`.
pub fn cumulative_integral(f: &GridFn, offset: f64) -> Result<GridFn, NumericsError> {
    let grid = *f.grid();
    GridFn::new(grid, cumulative_values(f.values(), grid.step(), offset)?)
}

/// Composite trapezoid total over a grid; second-order.
pub fn trapezoid_total(grid: &Grid, f: impl Fn(f64) -> f64) -> f64 {
    let n = grid.len();
    let inner: f64 = (1..n - 1).map(|i| f(grid.s(i))).sum();
    grid.step() * (0.5 * (f(grid.a()) + f(grid.b())) + inner)
}
