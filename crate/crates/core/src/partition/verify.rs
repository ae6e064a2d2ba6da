use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float as _;

use super::grid::{label_domains_with, DomainClass, DomainSign};
use super::separatrix::{separatrices_with, SeparatrixConfig};
use super::{NeumannAnalysis, PartitionConfig};
use crate::critical::{SearchConfig, Thresholds};
use crate::eigen::{Eigenfunction, ScalarField};
use crate::exec::{Executor, Serial};
use crate::flow::{Direction, FlowContext, Termination};
use crate::{Point, Result};

/// The checked properties of a partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Clause {
    /// Counts agree at twice the resolution.
    CountStable,
    /// `u` changes sign on every inner domain.
    InnerSignChanging,
    /// `u` has one sign on every boundary domain.
    BoundaryOneSigned,
    /// `int u` vanishes on inner domains.
    InnerIntegral,
    /// The gradient is tangent to every separatrix.
    GradientAlignment,
    /// The Neumann boundary belongs to the line set.
    NeumannBoundaryInLines,
    /// Every critical point belongs to the line set.
    CriticalInLines,
    /// The line set has finite length, stable under step refinement.
    FiniteLength,
}

impl Clause {
    /// All clauses in report order.
    pub const ALL: [Clause; 8] = [
        Clause::CountStable,
        Clause::InnerSignChanging,
        Clause::BoundaryOneSigned,
        Clause::InnerIntegral,
        Clause::GradientAlignment,
        Clause::NeumannBoundaryInLines,
        Clause::CriticalInLines,
        Clause::FiniteLength,
    ];

    /// Single-letter tag, `a` to `h`.
    pub fn tag(self) -> char {
        (b'a' + Clause::ALL.iter().position(|&c| c == self).unwrap_or(0) as u8) as char
    }

    /// One-line description.
    pub fn description(self) -> &'static str {
        match self {
            Clause::CountStable => "counts stable under grid doubling",
            Clause::InnerSignChanging => "inner domains are sign-changing",
            Clause::BoundaryOneSigned => "boundary domains are one-signed",
            Clause::InnerIntegral => "|int u| / int |u| small on inner domains",
            Clause::GradientAlignment => "gradient tangent to separatrices",
            Clause::NeumannBoundaryInLines => "Neumann boundary inside the line set",
            Clause::CriticalInLines => "critical points inside the line set",
            Clause::FiniteLength => "line length finite and stable",
        }
    }
}

/// Outcome of one clause.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClauseCheck {
    /// The clause.
    pub clause: Clause,
    /// Whether it holds.
    pub passed: bool,
    /// Measured quantity (its meaning depends on the clause).
    pub margin: f64,
    /// Worst point, if any.
    pub witness: Option<Point>,
}

/// Outcome of every clause.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    /// One entry per clause, in [`Clause::ALL`] order.
    pub clauses: Vec<ClauseCheck>,
}

impl VerificationReport {
    /// Whether every clause holds.
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.passed)
    }

    /// Result for one clause.
    pub fn get(&self, clause: Clause) -> Option<&ClauseCheck> {
        self.clauses.iter().find(|c| c.clause == clause)
    }
}

struct Worst {
    value: f64,
    at: Option<Point>,
}

impl Worst {
    fn new() -> Self {
        Worst { value: 0.0, at: None }
    }

    fn offer(&mut self, value: f64, at: Point) {
        if self.at.is_none() || value > self.value {
            self.value = value;
            self.at = Some(at);
        }
    }
}

/// Largest `|grad u x tangent| / (|grad u| |tangent|)` over the midpoints of
/// a sampled flow line, using the cubic Hermite interpolant of the samples.
fn alignment(ef: &Eigenfunction, samples: &[(f64, Point)], floor: f64, skip_last: bool, worst: &mut Worst) {
    let pairs = samples.len().saturating_sub(if skip_last { 2 } else { 1 });
    for w in samples.windows(2).take(pairs) {
        let ((t0, z0), (t1, z1)) = (w[0], w[1]);
        let dt = t1 - t0;
        if dt == 0.0 {
            continue;
        }
        let f0 = -ef.gradient(z0);
        let f1 = -ef.gradient(z1);
        let zm = Point::new(0.5 * (z0.x + z1.x), 0.5 * (z0.y + z1.y)) + (f0 - f1) * (dt / 8.0);
        let tangent = (z1 - z0) * (1.5 / dt) - (f0 + f1) * 0.25;
        let g = ef.gradient(zm);
        let (gn, tn) = (g.norm(), tangent.norm());
        if gn < floor || tn == 0.0 {
            continue;
        }
        worst.offer(g.cross(tangent).abs() / (gn * tn), zm);
    }
}

/// Checks every clause on the calling thread.
pub fn verify_partition(ef: &Eigenfunction, analysis: &NeumannAnalysis, cfg: &PartitionConfig) -> Result<VerificationReport> {
    verify_partition_with(ef, analysis, cfg, &Serial)
}

/// Checks every clause.
pub fn verify_partition_with<E: Executor>(
    ef: &Eigenfunction,
    analysis: &NeumannAnalysis,
    cfg: &PartitionConfig,
    exec: &E,
) -> Result<VerificationReport> {
    let NeumannAnalysis { critical, lines, partition } = analysis;
    let th = Thresholds::for_eigenfunction(ef, &SearchConfig::default());
    let sup = ef.sup_norm();
    let dom = ef.domain();
    let mut out = Vec::with_capacity(8);

    // (a)
    let fine = PartitionConfig { resolution: cfg.resolution * 2, ..*cfg };
    let doubled = label_domains_with(ef, critical, lines, &fine, exec)?;
    let (c1, c2) = (partition.counts(), doubled.counts());
    out.push(ClauseCheck {
        clause: Clause::CountStable,
        passed: c1 == c2,
        margin: (c1.total as f64 - c2.total as f64).abs(),
        witness: None,
    });

    // (b), (c), (d)
    let mut b = (true, Worst { value: f64::INFINITY, at: None });
    let mut c = (true, Worst::new());
    let mut d = (true, Worst::new());
    for dm in &partition.domains {
        let s = dm.sign;
        match dm.class {
            DomainClass::Inner => {
                // smaller of the two sign extents; zero when one-signed
                let extent = s.max.min(-s.min).max(0.0) / sup;
                b.0 &= s.sign() == DomainSign::Mixed;
                if extent < b.1.value {
                    b.1 = Worst { value: extent, at: Some(dm.witness) };
                }
                let ratio = if dm.abs_integral > 0.0 { dm.integral.abs() / dm.abs_integral } else { 1.0 };
                d.0 &= ratio < cfg.int_tol;
                d.1.offer(ratio, dm.witness);
            }
            DomainClass::Boundary => {
                let minority = match s.sign() {
                    DomainSign::Positive => (-s.min).max(0.0),
                    DomainSign::Negative => s.max.max(0.0),
                    _ => s.max.min(-s.min).abs(),
                } / sup;
                c.0 &= matches!(s.sign(), DomainSign::Positive | DomainSign::Negative);
                c.1.offer(minority, dm.witness);
            }
        }
    }
    if b.1.at.is_none() {
        b.1.value = 0.0;
    }
    for (clause, (passed, w)) in [(Clause::InnerSignChanging, b), (Clause::BoundaryOneSigned, c), (Clause::InnerIntegral, d)] {
        out.push(ClauseCheck { clause, passed, margin: w.value, witness: w.at });
    }

    // (e)
    let mut e = Worst::new();
    let floor = 100.0 * th.eps_crit;
    for s in &lines.separatrices {
        let hit = matches!(s.trajectory.termination, Termination::HitDirichlet { .. });
        alignment(ef, &s.trajectory.samples, floor, hit, &mut e);
    }
    out.push(ClauseCheck { clause: Clause::GradientAlignment, passed: e.value < cfg.align_tol, margin: e.value, witness: e.at });

    // (f)
    let mut f = Worst::new();
    if dom.has_neumann() {
        let ctx = FlowContext::new(ef, critical, cfg.flow)?;
        let k = 64;
        let checks = exec.map(k, |i| -> Result<(f64, Point)> {
            let p = dom.boundary_point((i as f64 + 0.25) * dom.perimeter() / k as f64);
            let mut dev = lines.distance(p);
            for dir in [Direction::Forward, Direction::Backward] {
                for (_, q) in ctx.integrate(p, dir)?.samples {
                    dev = dev.max(dom.inset(q).abs());
                }
            }
            Ok((dev, p))
        });
        for r in checks {
            let (dev, p) = r?;
            f.offer(dev, p);
        }
    }
    out.push(ClauseCheck {
        clause: Clause::NeumannBoundaryInLines,
        passed: f.value <= 1e-8,
        margin: f.value,
        witness: f.at,
    });

    // (g)
    let mut g = (true, Worst::new());
    let has_lines = !lines.separatrices.is_empty();
    for (i, cp) in critical.points.iter().enumerate() {
        let dist = if cp.kind.is_saddle_like() {
            if lines.separatrices.iter().any(|s| s.saddle == i) {
                0.0
            } else {
                f64::INFINITY
            }
        } else if has_lines && cp.kind.is_extremum() {
            let mut dd = f64::INFINITY;
            for line in lines.polylines() {
                for q in line {
                    dd = dd.min(q.dist(cp.location));
                }
            }
            if dom.has_neumann() {
                dd = dd.min(dom.inset(cp.location).abs());
            }
            for cv in &lines.critical_curves {
                dd = dd.min(cv.distance(cp.location));
            }
            dd
        } else {
            lines.distance(cp.location)
        };
        g.0 &= dist <= 1e-9;
        g.1.offer(dist, cp.location);
    }
    out.push(ClauseCheck { clause: Clause::CriticalInLines, passed: g.0, margin: g.1.value, witness: g.1.at });

    // (h)
    let len = lines.total_length();
    let refined_cfg = SeparatrixConfig {
        flow: crate::flow::FlowConfig { max_step: cfg.separatrix.flow.max_step * 0.5, ..cfg.separatrix.flow },
        ..cfg.separatrix
    };
    let refined: f64 =
        separatrices_with(ef, critical, &refined_cfg, exec)?.iter().map(|s| s.length()).sum::<f64>() + (len
            - lines.separatrices.iter().map(|s| s.length()).sum::<f64>());
    let rel = if len > 0.0 { (refined - len).abs() / len } else { 0.0 };
    out.push(ClauseCheck {
        clause: Clause::FiniteLength,
        passed: len.is_finite() && rel < cfg.length_tol,
        margin: rel,
        witness: None,
    });
    Ok(VerificationReport { clauses: out })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clause_tags_run_from_a_to_h() {
        let tags: alloc::string::String = Clause::ALL.iter().map(|c| c.tag()).collect();
        assert_eq!(tags, "abcdefgh");
    }

    #[test]
    fn alignment_of_an_exact_flow_line_is_small() {
        let ef = Eigenfunction::new(crate::eigen::ModeSpec::rectangle(1.0, 1.0, 1, 1).unwrap()).unwrap();
        // the diagonal is a flow line of sin(pi x) sin(pi y)
        let samples: Vec<(f64, Point)> = (0..10).map(|k| (k as f64, Point::new(0.1 + 0.03 * k as f64, 0.1 + 0.03 * k as f64))).collect();
        let mut w = Worst::new();
        alignment(&ef, &samples, 0.0, false, &mut w);
        assert!(w.value < 1e-12);
    }
}
