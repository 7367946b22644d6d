use super::{CurveSamples, Frame, GridFn, NumericsError, Vec3};

/// Output of [`integrate_frenet`]: positions plus the transported frame.
#[derive(Debug, Clone)]
pub struct FrenetTrajectory {
    pub curve: CurveSamples,
    pub frames: Vec<Frame>,
}

impl FrenetTrajectory {
    /// Largest Gram-matrix deviation over all frames.
    pub fn max_frame_deviation(&self) -> f64 {
        self.frames.iter().map(Frame::deviation).fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy)]
struct State {
    p: Vec3,
    t: Vec3,
    n: Vec3,
    b: Vec3,
}

impl State {
    fn rate(&self, kappa: f64, tau: f64) -> State {
        State {
            p: self.t,
            t: self.n * kappa,
            n: self.b * tau - self.t * kappa,
            b: -self.n * tau,
        }
    }

    fn axpy(&self, h: f64, d: &State) -> State {
        State {
            p: self.p + d.p * h,
            t: self.t + d.t * h,
            n: self.n + d.n * h,
            b: self.b + d.b * h,
        }
    }
}

/// Integrates `dt/ds = κn, dn/ds = -κt + τb, db/ds = -τn, dp/ds = t` with classic
/// RK4 over the grid shared by `kappa` and `tau`. Half-step coefficients are
/// linear interpolants; the frame is re-orthonormalized after every step.
pub fn integrate_frenet(
    kappa: &GridFn,
    tau: &GridFn,
    frame0: &Frame,
    p0: Vec3,
) -> Result<FrenetTrajectory, NumericsError> {
    if kappa.grid() != tau.grid() {
        return Err(NumericsError::GridMismatch);
    }
    let frame0 = Frame::new(frame0.t, frame0.n, frame0.b)?;
    let grid = *kappa.grid();
    let h = grid.step();
    let (k, w) = (kappa.values(), tau.values());

    let mut state = State { p: p0, t: frame0.t, n: frame0.n, b: frame0.b };
    let mut points = Vec::with_capacity(grid.len());
    let mut frames = Vec::with_capacity(grid.len());
    points.push(state.p);
    frames.push(frame0);

    for i in 0..grid.len() - 1 {
        let (k0, k1) = (k[i], k[i + 1]);
        let (w0, w1) = (w[i], w[i + 1]);
        let (km, wm) = (0.5 * (k0 + k1), 0.5 * (w0 + w1));

        let d1 = state.rate(k0, w0);
        let d2 = state.axpy(0.5 * h, &d1).rate(km, wm);
        let d3 = state.axpy(0.5 * h, &d2).rate(km, wm);
        let d4 = state.axpy(h, &d3).rate(k1, w1);
        let mut next = state;
        next.p += (d1.p + (d2.p + d3.p) * 2.0 + d4.p) * (h / 6.0);
        next.t += (d1.t + (d2.t + d3.t) * 2.0 + d4.t) * (h / 6.0);
        next.n += (d1.n + (d2.n + d3.n) * 2.0 + d4.n) * (h / 6.0);
        next.b += (d1.b + (d2.b + d3.b) * 2.0 + d4.b) * (h / 6.0);

        let frame = Frame::orthonormalized(next.t, next.n, next.b)
            .ok_or(NumericsError::NonFinite { index: i + 1 })?;
        state = State { p: next.p, t: frame.t, n: frame.n, b: frame.b };
        points.push(state.p);
        frames.push(frame);
    }

    Ok(FrenetTrajectory { curve: CurveSamples::new(grid, points)?, frames })
}
