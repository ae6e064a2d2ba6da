use alloc::vec::Vec;
use core::f64::consts::TAU;

#[allow(unused_imports)]
use num_traits::Float as _;

use super::separatrix::Separatrix;
use crate::critical::{CriticalCurve, CriticalSet};
use crate::eigen::DomainSpec;
use crate::Point;

/// A piece of the Neumann boundary, in boundary coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryArc {
    /// Start coordinate.
    pub from: f64,
    /// End coordinate.
    pub to: f64,
}

/// The skeleton of the partition.
#[derive(Debug, Clone, PartialEq)]
pub struct NeumannLineSet {
    /// Domain the set lives in.
    pub domain: DomainSpec,
    /// Separatrices of all saddle-type points.
    pub separatrices: Vec<Separatrix>,
    /// Circles of critical points.
    pub critical_curves: Vec<CriticalCurve>,
    /// The Neumann boundary.
    pub neumann_boundary: Vec<BoundaryArc>,
    /// Every isolated critical point.
    pub isolated_points: Vec<Point>,
    /// Dirichlet endpoints of separatrices, kept apart from the set itself.
    pub feet: Vec<Point>,
}

/// Assembles the line set from a critical inventory and its separatrices.
pub fn neumann_line_set(domain: DomainSpec, crit: &CriticalSet, separatrices: Vec<Separatrix>) -> NeumannLineSet {
    let neumann_boundary = if domain.has_neumann() {
        alloc::vec![BoundaryArc { from: 0.0, to: domain.perimeter() }]
    } else {
        Vec::new()
    };
    let feet = separatrices.iter().filter_map(Separatrix::foot).collect();
    NeumannLineSet {
        domain,
        separatrices,
        critical_curves: crit.curves.clone(),
        neumann_boundary,
        isolated_points: crit.points.iter().map(|p| p.location).collect(),
        feet,
    }
}

pub(crate) fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let l2 = ab.dot(ab);
    let t = if l2 > 0.0 { ((p - a).dot(ab) / l2).clamp(0.0, 1.0) } else { 0.0 };
    p.dist(a + ab * t)
}

impl NeumannLineSet {
    /// Separatrix polylines.
    pub fn polylines(&self) -> impl Iterator<Item = &[Point]> {
        self.separatrices.iter().map(|s| s.polyline.as_slice())
    }

    /// Total length of separatrices, critical circles and Neumann arcs.
    pub fn total_length(&self) -> f64 {
        let seps: f64 = self.separatrices.iter().map(Separatrix::length).sum();
        let circles: f64 = self.critical_curves.iter().map(|c| TAU * c.radius).sum();
        // a critical circle on the Neumann boundary is counted once
        let arcs: f64 = if self.critical_curves.iter().any(|c| (c.radius - 1.0).abs() < 1e-12) {
            0.0
        } else {
            self.neumann_boundary.iter().map(|a| a.to - a.from).sum()
        };
        seps + circles + arcs
    }

    /// Euclidean distance from `p` to the set.
    pub fn distance(&self, p: Point) -> f64 {
        let mut d = f64::INFINITY;
        for line in self.polylines() {
            for w in line.windows(2) {
                d = d.min(segment_distance(p, w[0], w[1]));
            }
        }
        for c in &self.critical_curves {
            d = d.min(c.distance(p));
        }
        if !self.neumann_boundary.is_empty() {
            d = d.min(self.domain.inset(p).abs());
        }
        for q in &self.isolated_points {
            d = d.min(p.dist(*q));
        }
        d
    }
}
