//! The descent flow `z' = -grad u` and its limits in both time directions.
//!
//! Integration uses the Dormand–Prince 5(4) pair on the state `(x, y, t)`.
//! Far from critical points the parameter is time; once `|grad u|` drops
//! below a multiple of the critical threshold the parameter switches to arc
//! length, with `dt/ds = 1 / |grad u|`. Forward means descent.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float as _;

use crate::critical::{CriticalSet, CurveSign, Extremum, SearchConfig, Thresholds};
use crate::eigen::{BoundaryPart, DomainSpec, Eigenfunction, ScalarField};
use crate::{Error, Point, Result};

/// Time direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `t -> +inf`: `u` decreases.
    Forward,
    /// `t -> -inf`: `u` increases.
    Backward,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        }
    }
}

/// How a trajectory ended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination {
    /// Converged to the isolated critical point with this index.
    ConvergedTo(usize),
    /// Converged to a critical circle, near the given point of it.
    ConvergedToCurve {
        /// Index of the curve.
        curve: usize,
        /// Nearest point of the circle at capture.
        at: Point,
    },
    /// Reached the Dirichlet boundary in finite time.
    HitDirichlet {
        /// Time of the hit (negative for backward trajectories).
        t: f64,
        /// Boundary point.
        at: Point,
    },
    /// Converged to a critical point on the Neumann boundary.
    StalledOnNeumann(usize),
    /// Step budget exhausted.
    Budget,
}

impl Termination {
    /// Whether the step budget ran out.
    pub fn is_budget(&self) -> bool {
        matches!(self, Termination::Budget)
    }
}

/// Samples of one half of a flow line.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// `(t, z)` pairs; `t` decreases for backward trajectories.
    pub samples: Vec<(f64, Point)>,
    /// How the trajectory ended.
    pub termination: Termination,
    /// Set when an interior trajectory had to be pulled back across the
    /// Neumann boundary.
    pub neumann_crossing: bool,
}

impl Trajectory {
    /// Length of the sampled polyline.
    pub fn arc_length(&self) -> f64 {
        self.samples.windows(2).map(|w| w[0].1.dist(w[1].1)).sum()
    }

    /// Last sampled point.
    pub fn end(&self) -> Point {
        self.samples.last().expect("trajectories hold at least the seed").1
    }
}

/// A full flow line through a seed.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowLine {
    /// Seed point.
    pub seed: Point,
    /// `t >= 0` half.
    pub forward: Trajectory,
    /// `t <= 0` half.
    pub backward: Trajectory,
    /// Total length of both halves.
    pub arc_length: f64,
}

/// The two limits of a flow line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitSignature {
    /// `t -> -inf` end.
    pub alpha: Termination,
    /// `t -> +inf` end.
    pub omega: Termination,
}

/// Integrator settings. Lengths are in units of `1 / sqrt(lambda)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowConfig {
    /// Relative local error tolerance.
    pub rtol: f64,
    /// Absolute local error tolerance.
    pub atol: f64,
    /// Largest spatial step.
    pub max_step: f64,
    /// Capture radius around attractors.
    pub capture_radius: f64,
    /// Step budget per trajectory.
    pub max_steps: usize,
    /// Switch to arc length when `|grad u|` is below this multiple of the
    /// critical threshold.
    pub slow_factor: f64,
    /// Boundary-hit localisation tolerance.
    pub boundary_tol: f64,
    /// Largest time step times the largest Hessian eigenvalue magnitude;
    /// infinite to disable.
    pub stiffness_cap: f64,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig {
            rtol: 1e-9,
            atol: 1e-12,
            max_step: 0.05,
            capture_radius: 0.02,
            max_steps: 20_000,
            slow_factor: 100.0,
            boundary_tol: 1e-10,
            stiffness_cap: f64::INFINITY,
        }
    }
}

impl FlowConfig {
    /// Checks ranges.
    pub fn validate(&self) -> Result<()> {
        let pos = |v: f64| v > 0.0 && v.is_finite();
        if pos(self.rtol)
            && pos(self.atol)
            && pos(self.max_step)
            && pos(self.capture_radius)
            && pos(self.slow_factor)
            && pos(self.boundary_tol)
            && self.max_steps > 0
            && self.stiffness_cap > 0.0
        {
            Ok(())
        } else {
            Err(Error::InvalidConfig("flow tolerances must be positive"))
        }
    }
}

// Dormand–Prince 5(4) tableau
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

#[derive(Debug, Clone, Copy, PartialEq)]
struct State {
    z: Point,
    t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Param {
    Time,
    Arc,
}

/// Everything needed to integrate flow lines of one eigenfunction.
#[derive(Debug, Clone)]
pub struct FlowContext<'a> {
    ef: &'a Eigenfunction,
    crit: &'a CriticalSet,
    th: Thresholds,
    cfg: FlowConfig,
    max_step: f64,
    capture: f64,
}

impl<'a> FlowContext<'a> {
    /// Binds an eigenfunction, its critical set and the settings.
    pub fn new(ef: &'a Eigenfunction, crit: &'a CriticalSet, cfg: FlowConfig) -> Result<Self> {
        cfg.validate()?;
        let th = Thresholds::for_eigenfunction(ef, &SearchConfig::default());
        let f = ef.frequency();
        Ok(FlowContext { ef, crit, th, cfg, max_step: cfg.max_step / f, capture: cfg.capture_radius / f })
    }

    /// The eigenfunction.
    pub fn eigenfunction(&self) -> &'a Eigenfunction {
        self.ef
    }

    /// The critical set used for capture.
    pub fn critical_set(&self) -> &'a CriticalSet {
        self.crit
    }

    /// Thresholds in use.
    pub fn thresholds(&self) -> &Thresholds {
        &self.th
    }

    /// Capture radius in domain units.
    pub fn capture_radius(&self) -> f64 {
        self.capture
    }

    fn domain(&self) -> &DomainSpec {
        self.ef.domain()
    }

    fn rhs(&self, z: Point, sigma: f64, param: Param) -> [f64; 3] {
        let g = self.ef.gradient(z);
        match param {
            Param::Time => [-sigma * g.x, -sigma * g.y, sigma],
            Param::Arc => {
                let n = g.norm();
                if n == 0.0 {
                    [0.0, 0.0, 0.0]
                } else {
                    [-sigma * g.x / n, -sigma * g.y / n, sigma / n]
                }
            }
        }
    }

    /// One DP5(4) step; returns the 5th-order state and the scaled error.
    fn dp_step(&self, s: State, h: f64, sigma: f64, param: Param, k1: [f64; 3]) -> (State, f64) {
        let mut k = [[0.0f64; 3]; 7];
        k[0] = k1;
        for i in 1..7 {
            let mut y = [s.z.x, s.z.y, s.t];
            for j in 0..i {
                for d in 0..3 {
                    y[d] += h * A[i][j] * k[j][d];
                }
            }
            k[i] = self.rhs(Point::new(y[0], y[1]), sigma, param);
        }
        let mut y5 = [s.z.x, s.z.y, s.t];
        let mut err = 0.0f64;
        for d in 0..3 {
            let mut e = 0.0;
            for i in 0..7 {
                y5[d] += h * B5[i] * k[i][d];
                e += h * (B5[i] - B4[i]) * k[i][d];
            }
            if d < 2 {
                let base = if d == 0 { s.z.x } else { s.z.y };
                let sc = self.cfg.atol + self.cfg.rtol * base.abs().max(y5[d].abs());
                err = err.max((e / sc).abs());
            }
        }
        (State { z: Point::new(y5[0], y5[1]), t: y5[2] }, err)
    }

    fn capture_check(&self, z: Point, dir: Direction, exclude: Option<usize>, grad: f64) -> Option<Termination> {
        let want = match dir {
            Direction::Forward => Extremum::Min,
            Direction::Backward => Extremum::Max,
        };
        for (i, c) in self.crit.points.iter().enumerate() {
            if Some(i) == exclude {
                continue;
            }
            let d = c.location.dist(z);
            if d > self.capture {
                continue;
            }
            let attractor = c.extremum() == Some(want);
            if attractor || grad < self.th.eps_crit {
                return Some(if c.on_boundary == BoundaryPart::Neumann {
                    Termination::StalledOnNeumann(i)
                } else {
                    Termination::ConvergedTo(i)
                });
            }
        }
        let want_curve = match dir {
            Direction::Forward => CurveSign::MinCurve,
            Direction::Backward => CurveSign::MaxCurve,
        };
        for (i, c) in self.crit.curves.iter().enumerate() {
            if c.distance(z) <= self.capture && (c.sign == want_curve || grad < self.th.eps_crit) {
                return Some(Termination::ConvergedToCurve { curve: i, at: c.nearest(z) });
            }
        }
        None
    }

    /// Integrates from `z0` in direction `dir`.
    pub fn integrate(&self, z0: Point, dir: Direction) -> Result<Trajectory> {
        self.run(z0, dir, None, true)
    }

    /// Integrates from a seed next to the critical point `source`, which is
    /// ignored for capture until the trajectory leaves its capture radius.
    pub fn integrate_from(&self, z0: Point, dir: Direction, source: usize, record: bool) -> Result<Trajectory> {
        self.run(z0, dir, Some(source), record)
    }

    /// Terminations of both halves without storing samples.
    pub fn limit_signature(&self, z0: Point) -> Result<LimitSignature> {
        let omega = self.run(z0, Direction::Forward, None, false)?.termination;
        let alpha = self.run(z0, Direction::Backward, None, false)?.termination;
        Ok(LimitSignature { alpha, omega })
    }

    /// Both halves of the flow line through `z0`.
    pub fn flow_line(&self, z0: Point) -> Result<FlowLine> {
        let forward = self.integrate(z0, Direction::Forward)?;
        let backward = self.integrate(z0, Direction::Backward)?;
        let arc_length = forward.arc_length() + backward.arc_length();
        Ok(FlowLine { seed: z0, forward, backward, arc_length })
    }

    fn run(&self, z0: Point, dir: Direction, mut exclude: Option<usize>, record: bool) -> Result<Trajectory> {
        let dom = *self.domain();
        if !dom.contains(z0, 1e-9) {
            return Err(Error::OutsideDomain(z0));
        }
        let sigma = dir.sign();
        let on_neumann = dom.has_neumann() && dom.inset(z0).abs() <= 1e-12;
        let mut s = State { z: if on_neumann { dom.project_to_boundary(z0) } else { z0 }, t: 0.0 };
        let mut samples = Vec::new();
        samples.push((0.0, s.z));
        let traj = |samples: Vec<(f64, Point)>, termination, crossing| Trajectory {
            samples,
            termination,
            neumann_crossing: crossing,
        };

        let g0 = self.ef.gradient(s.z);
        if let Some(term) = self.capture_check(s.z, dir, exclude, g0.norm()) {
            return Ok(traj(samples, term, false));
        }
        if dom.has_dirichlet() && dom.inset(s.z) <= self.cfg.boundary_tol {
            // leaving through the boundary at once
            if -sigma * g0.dot(dom.outward_normal(s.z)) > 0.0 {
                let at = dom.project_to_boundary(s.z);
                return Ok(traj(samples, Termination::HitDirichlet { t: 0.0, at }, false));
            }
        }

        let slow = self.cfg.slow_factor * self.th.eps_crit;
        let mut crossing = false;
        let mut h = f64::NAN;
        let mut param = Param::Time;
        let mut steps = 0usize;
        while steps < self.cfg.max_steps {
            steps += 1;
            let g = self.ef.gradient(s.z);
            let gn = g.norm();
            let want = if gn < slow { Param::Arc } else { Param::Time };
            if want != param || h.is_nan() {
                param = want;
                h = match param {
                    Param::Time => self.max_step / gn.max(1e-300),
                    Param::Arc => self.max_step,
                };
            }
            let k1 = self.rhs(s.z, sigma, param);
            let speed = k1[0].hypot(k1[1]);
            if speed > 0.0 {
                h = h.min(self.max_step / speed);
            }
            if param == Param::Arc {
                // Newton estimate of the distance to the nearest zero of the gradient
                let ev = self.ef.hessian(s.z).eigen().values[0].abs();
                if ev > 0.0 {
                    h = h.min(0.5 * gn / ev);
                }
            } else if self.cfg.stiffness_cap.is_finite() {
                let ev = self.ef.hessian(s.z).eigen().values[0].abs();
                if ev > 0.0 {
                    h = h.min(self.cfg.stiffness_cap / ev);
                }
            }
            let (next, err) = self.dp_step(s, h, sigma, param, k1);
            if !next.z.is_finite() || !err.is_finite() {
                h *= 0.25;
                if h < 1e-300 {
                    return Err(Error::FlowFailure(s.z));
                }
                continue;
            }
            if err > 1.0 {
                h *= (0.9 * err.powf(-0.2)).max(0.1);
                continue;
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            let mut next = next;

            let inset = dom.inset(next.z);
            if inset < 0.0 {
                if dom.has_dirichlet() {
                    let (hit, t) = self.locate_exit(s, h, sigma, param, k1);
                    if record {
                        samples.push((t, hit));
                    }
                    return Ok(traj(samples, Termination::HitDirichlet { t, at: hit }, crossing));
                }
                if !on_neumann {
                    if h * speed > 1e-13 {
                        h *= 0.5;
                        continue;
                    }
                    crossing = true;
                }
                next.z = dom.project_to_boundary(next.z);
            }
            if on_neumann {
                next.z = dom.project_to_boundary(next.z);
            }
            s = next;
            if record {
                samples.push((s.t, s.z));
            }
            h *= factor;

            if let Some(src) = exclude {
                if self.crit.points[src].location.dist(s.z) > self.capture {
                    exclude = None;
                }
            }
            let gn = self.ef.gradient(s.z).norm();
            if let Some(term) = self.capture_check(s.z, dir, exclude, gn) {
                if !record {
                    samples.push((s.t, s.z));
                }
                return Ok(traj(samples, term, crossing));
            }
        }
        if !record {
            samples.push((s.t, s.z));
        }
        Ok(traj(samples, Termination::Budget, crossing))
    }

    /// Shrinks a step that left the domain until its end lies within
    /// `boundary_tol` of the boundary, then projects onto it.
    fn locate_exit(&self, s: State, h: f64, sigma: f64, param: Param, k1: [f64; 3]) -> (Point, f64) {
        let dom = self.domain();
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        let mut best = s;
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            let (trial, _) = self.dp_step(s, h * mid, sigma, param, k1);
            let inset = dom.inset(trial.z);
            if inset >= 0.0 {
                lo = mid;
                best = trial;
                if inset <= self.cfg.boundary_tol {
                    break;
                }
            } else {
                hi = mid;
                if -inset <= self.cfg.boundary_tol {
                    best = trial;
                    break;
                }
            }
        }
        (dom.project_to_boundary(best.z), best.t)
    }
}

/// Integrates the flow from `z0`.
pub fn integrate_flow(
    ef: &Eigenfunction,
    crit: &CriticalSet,
    z0: Point,
    dir: Direction,
    cfg: &FlowConfig,
) -> Result<Trajectory> {
    FlowContext::new(ef, crit, *cfg)?.integrate(z0, dir)
}

/// Both limits of the flow line through `z0`.
pub fn limit_signature(ef: &Eigenfunction, crit: &CriticalSet, z0: Point, cfg: &FlowConfig) -> Result<LimitSignature> {
    FlowContext::new(ef, crit, *cfg)?.limit_signature(z0)
}

#[cfg(test)]
mod tests {
    use super::*;

    const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];

    #[test]
    fn tableau_rows_sum_to_nodes() {
        for i in 0..7 {
            let s: f64 = A[i].iter().sum();
            assert!((s - C[i]).abs() < 1e-14, "row {i}");
        }
        let b5: f64 = B5.iter().sum();
        let b4: f64 = B4.iter().sum();
        assert!((b5 - 1.0).abs() < 1e-14 && (b4 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn config_validation() {
        assert!(FlowConfig::default().validate().is_ok());
        assert!(FlowConfig { rtol: 0.0, ..FlowConfig::default() }.validate().is_err());
    }
}
