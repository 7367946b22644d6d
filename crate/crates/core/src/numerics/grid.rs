use nalgebra::{Matrix3, Vector3};

use super::{NumericsError, FRAME_TOL};

pub type Vec3 = Vector3<f64>;

/// Uniform arc-length grid `s_i = a + i (b - a) / (n - 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    a: f64,
    b: f64,
    n: usize,
}

impl Grid {
    pub const MIN_SAMPLES: usize = 5;

    /// `n >= 5` samples over finite `a < b`.
    pub fn new(a: f64, b: f64, n: usize) -> Result<Self, NumericsError> {
        if !a.is_finite() || !b.is_finite() {
            return Err(NumericsError::InvalidGrid(format!("non-finite bounds ({a}, {b})")));
        }
        if a >= b {
            return Err(NumericsError::InvalidGrid(format!("a = {a} must be < b = {b}")));
        }
        if n < Self::MIN_SAMPLES {
            return Err(NumericsError::GridTooSmall { n, min: Self::MIN_SAMPLES });
        }
        Ok(Self { a, b, n })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        (self.b - self.a) / (self.n - 1) as f64
    }

    pub fn s(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.b
        } else {
            self.a + i as f64 * self.step()
        }
    }

    pub fn samples(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.s(i)).collect()
    }

    /// Same interval with twice the resolution (`2n - 1` samples).
    pub fn refined(&self) -> Self {
        Self { n: 2 * self.n - 1, ..*self }
    }

    /// Index of the sample closest to `s`, clamped to the grid.
    pub fn nearest_index(&self, s: f64) -> usize {
        let x = ((s - self.a) / self.step()).round();
        x.clamp(0.0, (self.n - 1) as f64) as usize
    }

    /// Index range that drops `fraction` of the samples at each end.
    pub fn interior(&self, fraction: f64) -> std::ops::Range<usize> {
        let trim = (fraction * self.n as f64).ceil() as usize;
        let trim = trim.min(self.n / 2);
        trim..self.n - trim
    }
}

/// A real function sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFn {
    grid: Grid,
    values: Vec<f64>,
}

impl GridFn {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self, NumericsError> {
        if values.len() != grid.len() {
            return Err(NumericsError::LengthMismatch {
                what: "grid function",
                expected: grid.len(),
                got: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(NumericsError::NonFinite { index });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64 + Sync + Send) -> Result<Self, NumericsError> {
        let values = crate::par::map_indices(grid.len(), |i| f(grid.s(i)));
        Self::new(grid, values)
    }

    pub fn constant(grid: Grid, value: f64) -> Result<Self, NumericsError> {
        Self::new(grid, vec![value; grid.len()])
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn at(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn last(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Linear interpolation at an arbitrary `s` inside the grid.
    pub fn interpolate(&self, s: f64) -> f64 {
        let h = self.grid.step();
        let x = ((s - self.grid.a()) / h).clamp(0.0, (self.grid.len() - 1) as f64);
        let i = (x.floor() as usize).min(self.grid.len() - 2);
        let w = x - i as f64;
        self.values[i] * (1.0 - w) + self.values[i + 1] * w
    }
}

/// Sampled positions of a space curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSamples {
    grid: Grid,
    points: Vec<Vec3>,
}

impl CurveSamples {
    pub fn new(grid: Grid, points: Vec<Vec3>) -> Result<Self, NumericsError> {
        if points.len() != grid.len() {
            return Err(NumericsError::LengthMismatch {
                what: "curve samples",
                expected: grid.len(),
                got: points.len(),
            });
        }
        if let Some(index) = points.iter().position(|p| !p.iter().all(|c| c.is_finite())) {
            return Err(NumericsError::NonFinite { index });
        }
        Ok(Self { grid, points })
    }

    /// Assembles a curve from three coordinate columns.
    pub fn from_components(grid: Grid, x: &[f64], y: &[f64], z: &[f64]) -> Result<Self, NumericsError> {
        let points = x
            .iter()
            .zip(y)
            .zip(z)
            .map(|((&x, &y), &z)| Vec3::new(x, y, z))
            .collect();
        Self::new(grid, points)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn component(&self, axis: usize) -> Vec<f64> {
        self.points.iter().map(|p| p[axis]).collect()
    }

    /// Largest pointwise distance to another curve on the same grid.
    pub fn max_distance(&self, other: &CurveSamples) -> f64 {
        self.points
            .iter()
            .zip(&other.points)
            .map(|(p, q)| (p - q).norm())
            .fold(0.0, f64::max)
    }
}

/// Orthonormal Frenet frame: tangent, principal normal, binormal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub t: Vec3,
    pub n: Vec3,
    pub b: Vec3,
}

impl Frame {
    /// Checked constructor: unit, pairwise orthogonal, `b = t × n`, all within 1e-9.
    pub fn new(t: Vec3, n: Vec3, b: Vec3) -> Result<Self, NumericsError> {
        let frame = Self { t, n, b };
        let deviation = frame.deviation();
        if deviation.is_finite() && deviation <= FRAME_TOL {
            Ok(frame)
        } else {
            Err(NumericsError::NotOrthonormal { deviation })
        }
    }

    /// Builds `t, n` by modified Gram–Schmidt and sets `b = t × n`.
    pub fn from_tangent_normal(t: Vec3, n: Vec3) -> Option<Self> {
        let t = t.try_normalize(0.0)?;
        let n = (n - t * t.dot(&n)).try_normalize(0.0)?;
        Some(Self { t, n, b: t.cross(&n) })
    }

    /// Re-orthonormalizes a drifted triple by modified Gram–Schmidt.
    pub fn orthonormalized(t: Vec3, n: Vec3, b: Vec3) -> Option<Self> {
        let t = t.try_normalize(0.0)?;
        let n = (n - t * t.dot(&n)).try_normalize(0.0)?;
        let b = b - t * t.dot(&b);
        let b = (b - n * n.dot(&b)).try_normalize(0.0)?;
        Some(Self { t, n, b })
    }

    pub fn identity() -> Self {
        Self { t: Vec3::x(), n: Vec3::y(), b: Vec3::z() }
    }

    pub fn matrix(&self) -> Matrix3<f64> {
        Matrix3::from_columns(&[self.t, self.n, self.b])
    }

    /// Max-entry deviation of the Gram matrix from identity, combined with `|b - t × n|`.
    pub fn deviation(&self) -> f64 {
        let m = self.matrix();
        let gram = m.transpose() * m - Matrix3::identity();
        let gram_dev = gram.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
        gram_dev.max((self.b - self.t.cross(&self.n)).norm())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(Grid::new(0.0, 1.0, 5).is_ok());
        assert!(matches!(Grid::new(0.0, 1.0, 4), Err(NumericsError::GridTooSmall { .. })));
        assert_eq!(Grid::new(0.0, 1.0, 6).unwrap().s(5), 1.0);
        assert!(Grid::new(1.0, 1.0, 9).is_err());
        assert!(Grid::new(2.0, 1.0, 9).is_err());
        assert!(Grid::new(0.0, f64::INFINITY, 9).is_err());
    }

    #[test]
    fn grid_samples_increase_and_hit_ends() {
        let g = Grid::new(-0.3, 1.7, 4097).unwrap();
        let s = g.samples();
        assert_eq!(s[0], -0.3);
        assert_eq!(s[4096], 1.7);
        assert!(s.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(g.nearest_index(0.7), 2048);
        assert_eq!(g.refined().len(), 8193);
    }

    #[test]
    fn interior_trims_both_ends() {
        let g = Grid::new(0.0, 1.0, 101).unwrap();
        assert_eq!(g.interior(0.02), 3..98);
        assert_eq!(g.interior(0.0), 0..101);
    }

    #[test]
    fn gridfn_rejects_bad_values() {
        let g = Grid::new(0.0, 1.0, 5).unwrap();
        assert!(matches!(
            GridFn::new(g, vec![0.0, 1.0, f64::NAN, 0.0, 0.0]),
            Err(NumericsError::NonFinite { index: 2 })
        ));
        assert!(GridFn::new(g, vec![0.0; 4]).is_err());
        let f = GridFn::from_fn(g, |s| 2.0 * s).unwrap();
        assert!((f.interpolate(0.3) - 0.6).abs() < 1e-15);
    }

    #[test]
    fn frame_checks() {
        assert!(Frame::new(Vec3::x(), Vec3::y(), Vec3::z()).is_ok());
        assert!(Frame::new(Vec3::x(), Vec3::y(), -Vec3::z()).is_err());
        assert!(Frame::new(Vec3::x(), Vec3::new(0.1, 1.0, 0.0), Vec3::z()).is_err());
        let f = Frame::orthonormalized(
            Vec3::new(1.0, 1e-3, 0.0),
            Vec3::new(2e-3, 1.0, 1e-4),
            Vec3::new(0.0, -1e-3, 1.0),
        )
        .unwrap();
        assert!(f.deviation() < 1e-14);
    }
}
