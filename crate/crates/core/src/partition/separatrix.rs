use alloc::vec::Vec;
use core::f64::consts::TAU;

#[allow(unused_imports)]
use num_traits::Float as _;

use crate::critical::{CriticalKind, CriticalPoint, CriticalSet};
use crate::eigen::{Eigenfunction, ScalarField};
use crate::exec::Executor;
use crate::flow::{Direction, FlowConfig, FlowContext, Termination, Trajectory};
use crate::{Error, Point, Result};

/// Which invariant set of the saddle a ray belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// Flows into the saddle as `t -> +inf`; traced backward.
    Stable,
    /// Leaves the saddle; traced forward.
    Unstable,
}

impl Branch {
    /// Integration direction that moves away from the saddle.
    pub fn direction(self) -> Direction {
        match self {
            Branch::Stable => Direction::Backward,
            Branch::Unstable => Direction::Forward,
        }
    }
}

/// One ray of the stable or unstable set of a saddle-type point.
#[derive(Debug, Clone, PartialEq)]
pub struct Separatrix {
    /// Index of the emitting point in the critical set.
    pub saddle: usize,
    /// Stable or unstable.
    pub branch: Branch,
    /// Position among the rays of this saddle.
    pub ray_index: usize,
    /// Seed next to the saddle.
    pub seed: Point,
    /// Flow from the seed to the far terminus.
    pub trajectory: Trajectory,
    /// Saddle, trajectory samples and terminus, in order.
    pub polyline: Vec<Point>,
}

impl Separatrix {
    /// How the ray ends.
    pub fn terminus(&self) -> Termination {
        self.trajectory.termination
    }

    /// Length of the polyline.
    pub fn length(&self) -> f64 {
        self.polyline.windows(2).map(|w| w[0].dist(w[1])).sum()
    }

    /// Dirichlet boundary point where the ray ends, if it does.
    pub fn foot(&self) -> Option<Point> {
        match self.trajectory.termination {
            Termination::HitDirichlet { at, .. } => Some(at),
            _ => None,
        }
    }
}

/// Settings for separatrix tracing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparatrixConfig {
    /// Seed offset from the saddle, in units of `1 / sqrt(lambda)`.
    pub offset: f64,
    /// Angular samples used to locate the rays of a fully degenerate point.
    pub angular_samples: usize,
    /// Integrator settings.
    pub flow: FlowConfig,
}

impl Default for SeparatrixConfig {
    fn default() -> Self {
        SeparatrixConfig {
            offset: 1e-4,
            angular_samples: 1440,
            flow: FlowConfig { rtol: 1e-11, atol: 1e-13, stiffness_cap: 1.0, ..FlowConfig::default() },
        }
    }
}

/// Seeds and branches of the rays leaving `cp`.
pub fn ray_seeds(ef: &Eigenfunction, cp: &CriticalPoint, eps: f64, angular_samples: usize) -> Vec<(Point, Branch)> {
    let z = cp.location;
    let dom = ef.domain();
    let mut out = Vec::new();
    let mut push = |seed: Point, branch: Branch| {
        let inset = dom.inset(seed);
        if inset >= 0.0 {
            out.push((seed, branch));
        } else if inset >= -1e-3 * eps {
            out.push((dom.project_to_boundary(seed), branch));
        }
    };
    match cp.kind {
        CriticalKind::FullyDegenerate(_) => {
            let k = angular_samples.max(8);
            let dt = TAU / k as f64;
            let f: Vec<f64> = (0..k).map(|i| ef.value(z + crate::Vec2::unit(i as f64 * dt) * eps)).collect();
            for i in 0..k {
                let (a, b, c) = (f[(i + k - 1) % k], f[i], f[(i + 1) % k]);
                let branch = if b > a && b >= c {
                    Branch::Stable
                } else if b < a && b <= c {
                    Branch::Unstable
                } else {
                    continue;
                };
                let curv = a - 2.0 * b + c;
                let shift = if curv != 0.0 { (0.5 * (a - c) / curv).clamp(-0.5, 0.5) } else { 0.0 };
                let theta = (i as f64 + shift) * dt;
                push(z + crate::Vec2::unit(theta) * eps, branch);
            }
        }
        kind if kind.is_saddle_like() => {
            let u0 = ef.value(z);
            let stiff_sign = cp.hessian_eigvals[0].signum();
            for (axis, v) in cp.hessian_eigvecs.iter().enumerate() {
                for s in [1.0, -1.0] {
                    let seed = z + *v * (s * eps);
                    let du = ef.value(seed) - u0;
                    if du == 0.0 {
                        continue;
                    }
                    // the degenerate axis of a saddle-node keeps only the ray
                    // leaving the half-plane sector
                    if matches!(kind, CriticalKind::SaddleNode(_)) && axis == 1 && du.signum() == stiff_sign {
                        continue;
                    }
                    push(seed, if du > 0.0 { Branch::Stable } else { Branch::Unstable });
                }
            }
        }
        _ => {}
    }
    out
}

/// Traces every separatrix of every saddle-type point in `crit`.
pub fn separatrices_with<E: Executor>(
    ef: &Eigenfunction,
    crit: &CriticalSet,
    cfg: &SeparatrixConfig,
    exec: &E,
) -> Result<Vec<Separatrix>> {
    let ctx = FlowContext::new(ef, crit, cfg.flow)?;
    let eps = cfg.offset / ef.frequency();
    let mut jobs = Vec::new();
    for (i, cp) in crit.points.iter().enumerate() {
        for (r, (seed, branch)) in ray_seeds(ef, cp, eps, cfg.angular_samples).into_iter().enumerate() {
            jobs.push((i, r, seed, branch));
        }
    }
    let traced = exec.map(jobs.len(), |j| {
        let (i, _, seed, branch) = jobs[j];
        ctx.integrate_from(seed, branch.direction(), i, true)
    });
    let mut out = Vec::with_capacity(jobs.len());
    for ((saddle, ray_index, seed, branch), tr) in jobs.into_iter().zip(traced) {
        let trajectory = tr?;
        let end = match trajectory.termination {
            Termination::Budget => return Err(Error::StuckSeparatrix(seed)),
            Termination::ConvergedTo(i) | Termination::StalledOnNeumann(i) => Some(crit.points[i].location),
            Termination::ConvergedToCurve { at, .. } => Some(at),
            Termination::HitDirichlet { .. } => None,
        };
        let mut polyline = Vec::with_capacity(trajectory.samples.len() + 2);
        polyline.push(crit.points[saddle].location);
        polyline.extend(trajectory.samples.iter().map(|s| s.1));
        polyline.extend(end);
        out.push(Separatrix { saddle, branch, ray_index, seed, trajectory, polyline });
    }
    Ok(out)
}
