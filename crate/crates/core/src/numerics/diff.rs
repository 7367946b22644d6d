use super::{GridFn, NumericsError, Vec3};

/// Finite-difference weights for the `order`-th derivative at `x0` from the
/// nodes `xs` (Fornberg's recursion).
pub fn stencil_weights(x0: f64, xs: &[f64], order: usize) -> Vec<f64> {
    let n = xs.len();
    let mut c = vec![vec![0.0; order + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

/// Fourth-order stencil layout for one derivative order.
struct Stencils {
    /// half width of the centred stencil
    reach: usize,
    central: Vec<f64>,
    /// `near_start[i]` applies to sample `i` using samples `0..width`
    near_start: Vec<Vec<f64>>,
    width: usize,
}

impl Stencils {
    fn new(order: usize) -> Result<Self, NumericsError> {
        let reach = match order {
            1 | 2 => 2,
            3 => 3,
            _ => return Err(NumericsError::UnsupportedOrder(order)),
        };
        let width = order + 4;
        let offsets: Vec<f64> = (-(reach as i32)..=reach as i32).map(f64::from).collect();
        let central = stencil_weights(0.0, &offsets, order);
        let nodes: Vec<f64> = (0..width).map(|j| j as f64).collect();
        let near_start = (0..reach).map(|i| stencil_weights(i as f64, &nodes, order)).collect();
        Ok(Self { reach, central, near_start, width })
    }

    fn min_len(&self) -> usize {
        self.width.max(2 * self.reach + 1)
    }

    fn apply(&self, f: &[f64], i: usize, order: usize) -> f64 {
        let n = f.len();
        if i < self.reach {
            dot(&self.near_start[i], &f[..self.width])
        } else if i + self.reach >= n {
            // mirror of the start stencil; odd orders flip sign
            let k = n - 1 - i;
            let w = &self.near_start[k];
            let sign = if order % 2 == 1 { -1.0 } else { 1.0 };
            sign * w.iter().enumerate().map(|(j, wj)| wj * f[n - 1 - j]).sum::<f64>()
        } else {
            dot(&self.central, &f[i - self.reach..=i + self.reach])
        }
    }
}

fn dot(w: &[f64], f: &[f64]) -> f64 {
    w.iter().zip(f).map(|(a, b)| a * b).sum()
}

/// Derivative of order 1, 2 or 3 of uniformly spaced samples. Fourth-order
/// centred stencils in the interior, fourth-order one-sided stencils at the
/// edge samples the centred stencil cannot reach.
pub fn derivative(values: &[f64], h: f64, order: usize) -> Result<Vec<f64>, NumericsError> {
    let st = Stencils::new(order)?;
    let n = values.len();
    if n < 7.max(st.min_len()) {
        return Err(NumericsError::GridTooSmall { n, min: 7.max(st.min_len()) });
    }
    let scale = h.powi(order as i32);
    Ok(crate::par::map_indices(n, |i| st.apply(values, i, order) / scale))
}

/// Derivative evaluated on every `stride`-th sample sub-grid. Each residue class
/// `i ≡ r (mod stride)` is differentiated with step `stride·h` and scattered back,
/// which trades truncation error for less round-off amplification.
pub fn derivative_strided(
    values: &[f64],
    h: f64,
    order: usize,
    stride: usize,
) -> Result<Vec<f64>, NumericsError> {
    let stride = stride.max(1);
    if stride == 1 {
        return derivative(values, h, order);
    }
    let mut out = vec![0.0; values.len()];
    for r in 0..stride {
        let sub: Vec<f64> = values.iter().skip(r).step_by(stride).copied().collect();
        let d = derivative(&sub, h * stride as f64, order)?;
        for (k, v) in d.into_iter().enumerate() {
            out[r + k * stride] = v;
        }
    }
    Ok(out)
}

/// Derivative of a grid function (`order` in 1..=3, `n >= 7`).
pub fn finite_diff(f: &GridFn, order: usize) -> Result<GridFn, NumericsError> {
    let grid = *f.grid();
    GridFn::new(grid, derivative(f.values(), grid.step(), order)?)
}

/// Componentwise derivative of vector samples.
pub fn finite_diff_points(
    points: &[Vec3],
    h: f64,
    order: usize,
    stride: usize,
) -> Result<Vec<Vec3>, NumericsError> {
    let mut cols = Vec::with_capacity(3);
    for axis in 0..3 {
        let c: Vec<f64> = points.iter().map(|p| p[axis]).collect();
        cols.push(derivative_strided(&c, h, order, stride)?);
    }
    Ok((0..points.len()).map(|i| Vec3::new(cols[0][i], cols[1][i], cols[2][i])).collect())
}
