//! Ground state of `-1/2 Laplacian + omega^2 r^2/2 + g r^4` in D dimensions
//! by Numerov shooting on the reduced radial equation.
//!
//! With `u = r^((D-1)/2) psi` the radial problem is
//! `-u''/2 + [(D-1)(D-3)/(8 r^2) + V(r)] u = E u`. For `D >= 2` it is solved
//! on the logarithmic grid `r = e^t`, `u = e^(t/2) w`, where it becomes the
//! regular equation `w'' = [(D-2)^2/4 + 2 r^2 (V - E)] w` with `w ~ r^((D-2)/2)`
//! at the origin. `D = 1` has no centrifugal term and uses an even-parity
//! uniform grid. The eigenvalue is bracketed by node counting and bisected;
//! two grids are combined by Richardson extrapolation.

use crate::error::{Error, Result};

/// Smallest admissible grid.
pub const MIN_GRID_POINTS: usize = 2000;
/// Default grid.
pub const DEFAULT_GRID_POINTS: usize = 40_000;
/// Default cutoff in units of the confinement length.
pub const DEFAULT_X_MAX: f64 = 12.0;
/// Inner end of the logarithmic grid.
const X_ORIGIN: f64 = 1e-6;
const RESCALE: f64 = 1e200;

#[derive(Debug, Clone, PartialEq)]
pub struct RadialProblem {
    pub dimension: f64,
    pub omega: f64,
    pub coupling: f64,
    pub x_max: f64,
    pub grid_points: usize,
}

impl RadialProblem {
    /// Problem with the default grid and `x_max = 12` confinement lengths,
    /// the length being `g^(-1/6)` or `omega^(-1/2)`, whichever is shorter.
    pub fn new(dimension: f64, omega: f64, coupling: f64) -> Result<Self> {
        let quartic = if coupling > 0.0 { coupling.powf(-1.0 / 6.0) } else { f64::INFINITY };
        let harmonic = if omega > 0.0 { omega.powf(-0.5) } else { f64::INFINITY };
        let p = Self {
            dimension,
            omega,
            coupling,
            x_max: DEFAULT_X_MAX * quartic.min(harmonic),
            grid_points: DEFAULT_GRID_POINTS,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_x_max(mut self, x_max: f64) -> Self {
        self.x_max = x_max;
        self
    }

    pub fn with_grid_points(mut self, grid_points: usize) -> Self {
        self.grid_points = grid_points;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dimension;
        if !(d == 1.0 || d >= 2.0) {
            return Err(Error::InvalidArgument(format!("radial solver supports D = 1 or D >= 2, got {d}")));
        }
        if !(self.omega >= 0.0 && self.coupling >= 0.0) || self.omega == 0.0 && self.coupling == 0.0 {
            return Err(Error::InvalidArgument(format!(
                "need omega >= 0, g >= 0 and a confining potential, got omega = {}, g = {}",
                self.omega, self.coupling
            )));
        }
        if !(self.x_max.is_finite() && self.x_max > X_ORIGIN) {
            return Err(Error::InvalidArgument(format!("x_max must be finite and positive, got {}", self.x_max)));
        }
        if self.grid_points < MIN_GRID_POINTS {
            return Err(Error::InvalidArgument(format!("grid_points must be at least {MIN_GRID_POINTS}, got {}", self.grid_points)));
        }
        Ok(())
    }

    pub fn potential(&self, x: f64) -> f64 {
        let x2 = x * x;
        0.5 * self.omega * self.omega * x2 + self.coupling * x2 * x2
    }

    /// Potential plus the centrifugal-like term of the reduced equation.
    pub fn reduced_potential(&self, x: f64) -> f64 {
        let d = self.dimension;
        self.potential(x) + (d - 1.0) * (d - 3.0) / (8.0 * x * x)
    }

    /// Number of sign changes of the outward solution at energy `e`.
    fn nodes(&self, points: usize, e: f64) -> usize {
        if self.dimension == 1.0 {
            let h = self.x_max / points as f64;
            let f = |i: usize| 2.0 * (self.potential(i as f64 * h) - e);
            // u(-h) = u(h) closes the first Numerov step.
            let first = (1.0 + 5.0 * h * h * f(0) / 12.0) / (1.0 - h * h * f(1) / 12.0);
            numerov_nodes(points, h, 1.0, first, f)
        } else {
            let t0 = X_ORIGIN.ln();
            let h = (self.x_max.ln() - t0) / points as f64;
            let shift = 0.25 * (self.dimension - 2.0).powi(2);
            let f = |i: usize| {
                let x = (t0 + i as f64 * h).exp();
                shift + 2.0 * x * x * (self.potential(x) - e)
            };
            let slope = 0.5 * (self.dimension - 2.0);
            numerov_nodes(points, h, (slope * t0).exp(), (slope * (t0 + h)).exp(), f)
        }
    }

    /// Nodeless eigenvalue on a grid of `points` intervals.
    fn bisect(&self, points: usize) -> Result<f64> {
        if self.nodes(points, 0.0) != 0 {
            return Err(Error::Bracketing("the solution at E = 0 already has a node".into()));
        }
        let mut hi = 1.0;
        let mut doublings = 0;
        while self.nodes(points, hi) == 0 {
            hi *= 2.0;
            doublings += 1;
            if doublings > 200 {
                return Err(Error::Bracketing("no node found below E = 2^200".into()));
            }
        }
        let mut lo = 0.0;
        while hi - lo > 4.0 * f64::EPSILON * hi {
            let mid = 0.5 * (lo + hi);
            if self.nodes(points, mid) == 0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// WKB estimate `exp(-int sqrt(2 (V_red - E)))` of the amplitude at `x_max`
    /// relative to the outermost turning point.
    pub fn boundary_amplitude(&self, energy: f64) -> f64 {
        const STEPS: usize = 4000;
        let gap = |x: f64| (2.0 * (self.reduced_potential(x) - energy)).max(0.0).sqrt();
        let dx = self.x_max / STEPS as f64;
        let mut turning = self.x_max;
        while turning > dx && self.reduced_potential(turning) > energy {
            turning -= dx;
        }
        let h = (self.x_max - turning) / STEPS as f64;
        let mut sum = gap(turning) + gap(self.x_max);
        for i in 1..STEPS {
            sum += gap(turning + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        (-sum * h / 3.0).exp()
    }
}

/// Sign changes of the Numerov solution of `w'' = f w` from `w_0, w_1`, in
/// the summed form `y = (1 - h^2 f/12) w`, `y_(n+1) - y_n = y_n - y_(n-1) + h^2 f_n w_n`,
/// which keeps round-off from feeding the linearly growing mode.
fn numerov_nodes(points: usize, h: f64, w0: f64, w1: f64, f: impl Fn(usize) -> f64) -> usize {
    let c = h * h / 12.0;
    let (mut f_cur, mut w) = (f(1), w1);
    let mut y = (1.0 - c * f_cur) * w;
    let mut step = y - (1.0 - c * f(0)) * w0;
    let mut nodes = 0;
    for i in 2..=points {
        step += 12.0 * c * f_cur * w;
        y += step;
        f_cur = f(i);
        let next = y / (1.0 - c * f_cur);
        if next.signum() != w.signum() {
            nodes += 1;
        }
        w = next;
        if w.abs() > RESCALE {
            w /= RESCALE;
            y /= RESCALE;
            step /= RESCALE;
        }
    }
    nodes
}

/// Extrapolated eigenvalue with the two grid estimates it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    pub energy: f64,
    /// `|E(h/2) - E(h)| / 15`, the Richardson gap.
    pub error_estimate: f64,
    pub coarse: f64,
    pub fine: f64,
    pub boundary_amplitude: f64,
}

/// Ground-state energy; fails if the WKB boundary amplitude exceeds
/// `10^-(target_digits + 5)`.
pub fn ground_energy(p: &RadialProblem, target_digits: u32) -> Result<GroundState> {
    p.validate()?;
    let coarse = p.bisect(p.grid_points)?;
    let fine = p.bisect(2 * p.grid_points)?;
    let energy = fine + (fine - coarse) / 15.0;
    let amplitude = p.boundary_amplitude(energy);
    let limit = 10f64.powi(-(target_digits as i32 + 5));
    if amplitude > limit {
        return Err(Error::BoundaryAmplitude { amplitude, limit });
    }
    Ok(GroundState {
        energy,
        error_estimate: (fine - coarse).abs() / 15.0,
        coarse,
        fine,
        boundary_amplitude: amplitude,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_ground_states() {
        for d in [1.0, 2.0, 3.0, 10.0] {
            let p = RadialProblem::new(d, 1.0, 0.0).unwrap();
            let e = ground_energy(&p, 10).unwrap();
            assert!((e.energy - d / 2.0).abs() < 1e-10, "D = {d}: {e:?}");
        }
    }

    #[test]
    fn pure_quartic_two_dimensions() {
        let p = RadialProblem::new(2.0, 0.0, 1.0).unwrap();
        let e = ground_energy(&p, 10).unwrap();
        assert!((e.energy - 1.4771497535779972).abs() < 1e-10, "{e:?}");
    }

    #[test]
    fn short_domain_is_rejected() {
        let p = RadialProblem::new(3.0, 1.0, 0.0).unwrap().with_x_max(3.0);
        assert!(matches!(ground_energy(&p, 10), Err(Error::BoundaryAmplitude { .. })));
    }

    #[test]
    fn invalid_problems() {
        assert!(RadialProblem::new(1.5, 1.0, 0.0).is_err());
        assert!(RadialProblem::new(2.0, 0.0, 0.0).is_err());
        assert!(RadialProblem::new(2.0, 1.0, 0.0).unwrap().with_grid_points(100).validate().is_err());
    }
}
