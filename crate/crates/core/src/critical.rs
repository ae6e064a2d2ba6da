//! Critical points: search, Newton polish, classification and critical circles.
//!
//! Seeds come from grid cells in which both gradient components change sign,
//! from explicit candidates (rectangle corners, disk centre) and from 1-D
//! scans along the boundary. Every seed is polished by Newton steps with a
//! pseudo-inverse Hessian so that degenerate points still converge.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float as _;

use crate::eigen::{BoundaryPart, DomainSpec, Eigenfunction, ScalarField};
use crate::specfun;
use crate::{Error, Point, Result, Vec2};

/// Critical point type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CriticalKind {
    /// Non-degenerate local maximum.
    Max,
    /// Non-degenerate local minimum.
    Min,
    /// Non-degenerate saddle.
    Saddle,
    /// Rank-one Hessian, extremum of even order `k >= 4`.
    SemiDegenerateExtremum(u32),
    /// Rank-one Hessian, saddle of even order `k >= 4`.
    SemiDegenerateSaddle(u32),
    /// Rank-one Hessian, odd order `k >= 3`.
    SaddleNode(u32),
    /// Point of a curve of critical points.
    CurvePoint,
    /// Vanishing Hessian, locally `r^M sin(M t)` with `M >= 3`.
    FullyDegenerate(u32),
    /// The probes could not decide.
    Unresolved,
}

impl CriticalKind {
    /// Local extremum (including semi-degenerate ones).
    pub fn is_extremum(self) -> bool {
        matches!(self, CriticalKind::Max | CriticalKind::Min | CriticalKind::SemiDegenerateExtremum(_))
    }

    /// Any kind from which separatrices emanate.
    pub fn is_saddle_like(self) -> bool {
        matches!(
            self,
            CriticalKind::Saddle
                | CriticalKind::SemiDegenerateSaddle(_)
                | CriticalKind::SaddleNode(_)
                | CriticalKind::FullyDegenerate(_)
        )
    }

    /// Short lowercase name.
    pub fn name(self) -> &'static str {
        match self {
            CriticalKind::Max => "max",
            CriticalKind::Min => "min",
            CriticalKind::Saddle => "saddle",
            CriticalKind::SemiDegenerateExtremum(_) => "semi-degenerate-extremum",
            CriticalKind::SemiDegenerateSaddle(_) => "semi-degenerate-saddle",
            CriticalKind::SaddleNode(_) => "saddle-node",
            CriticalKind::CurvePoint => "curve-point",
            CriticalKind::FullyDegenerate(_) => "fully-degenerate",
            CriticalKind::Unresolved => "unresolved",
        }
    }

    /// Order parameter `k` or `M`, if any.
    pub fn order(self) -> Option<u32> {
        match self {
            CriticalKind::SemiDegenerateExtremum(k)
            | CriticalKind::SemiDegenerateSaddle(k)
            | CriticalKind::SaddleNode(k)
            | CriticalKind::FullyDegenerate(k) => Some(k),
            _ => None,
        }
    }
}

/// Maximum or minimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Extremum {
    /// Local maximum.
    Max,
    /// Local minimum.
    Min,
}

/// An isolated critical point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    /// Location.
    pub location: Point,
    /// `u` at the location.
    pub value: f64,
    /// Classification.
    pub kind: CriticalKind,
    /// Hessian eigenvalues, largest magnitude first.
    pub hessian_eigvals: [f64; 2],
    /// Matching unit eigenvectors.
    pub hessian_eigvecs: [Vec2; 2],
    /// Position relative to the boundary split.
    pub on_boundary: BoundaryPart,
}

impl CriticalPoint {
    /// Whether this point is a local maximum or minimum, and which.
    pub fn extremum(&self) -> Option<Extremum> {
        if !self.kind.is_extremum() {
            return None;
        }
        let lead = self.hessian_eigvals[0];
        Some(if lead < 0.0 { Extremum::Max } else { Extremum::Min })
    }
}

/// Whether a critical circle consists of minima or maxima.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurveSign {
    /// Curve of local minima.
    MinCurve,
    /// Curve of local maxima.
    MaxCurve,
}

/// A circle of critical points centred at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalCurve {
    /// Radius.
    pub radius: f64,
    /// Minima or maxima.
    pub sign: CurveSign,
    /// The constant value of `u` on the circle.
    pub value: f64,
    /// Position relative to the boundary split.
    pub on_boundary: BoundaryPart,
}

impl CriticalCurve {
    /// Distance from `p` to the circle.
    pub fn distance(&self, p: Point) -> f64 {
        (p.radius() - self.radius).abs()
    }

    /// Point of the circle nearest to `p`.
    pub fn nearest(&self, p: Point) -> Point {
        let r = p.radius();
        if r == 0.0 {
            Point::new(self.radius, 0.0)
        } else {
            Point::new(p.x * self.radius / r, p.y * self.radius / r)
        }
    }
}

/// Search parameters. Lengths are in units of `1 / sqrt(lambda)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    /// Grid cells per wavelength `2 pi / sqrt(lambda)`; at least 64.
    pub cells_per_wavelength: f64,
    /// Merge radius for duplicates.
    pub dedupe: f64,
    /// Probe radius for rank-one classification.
    pub probe_radius: f64,
    /// Circle radius for the angular sign pattern of fully degenerate points.
    pub circle_radius: f64,
    /// Newton iteration cap.
    pub newton_iters: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            cells_per_wavelength: 64.0,
            dedupe: 1e-2,
            probe_radius: 0.2,
            circle_radius: 0.3,
            newton_iters: 100,
        }
    }
}

impl SearchConfig {
    /// Checks ranges.
    pub fn validate(&self) -> Result<()> {
        let ok = self.cells_per_wavelength >= 64.0
            && self.cells_per_wavelength.is_finite()
            && self.dedupe > 0.0
            && self.probe_radius > 0.0
            && self.circle_radius > 0.0
            && self.newton_iters > 0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig("search grid must have at least 64 cells per wavelength and positive radii"))
        }
    }
}

/// Tolerances derived from the frequency and sup-norm of a field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// `sqrt(lambda)`.
    pub frequency: f64,
    /// `sup |u|`.
    pub sup: f64,
    /// Gradient magnitude below which a point counts as critical.
    pub eps_crit: f64,
    /// Hessian eigenvalue magnitude below which it counts as zero.
    pub hess_tol: f64,
    /// Value magnitude below which `u` counts as zero.
    pub eps_val: f64,
    /// Duplicate merge radius.
    pub dedupe: f64,
    /// Rank-one probe radius.
    pub probe_radius: f64,
    /// Sign-pattern circle radius.
    pub circle_radius: f64,
}

impl Thresholds {
    /// Tolerances for a field with eigenvalue `lambda` and sup-norm `sup`.
    pub fn new(lambda: f64, sup: f64, cfg: &SearchConfig) -> Self {
        let f = lambda.sqrt();
        Thresholds {
            frequency: f,
            sup,
            eps_crit: 1e-9 * f * sup,
            hess_tol: 1e-6 * lambda * sup,
            eps_val: 1e-8 * sup,
            dedupe: cfg.dedupe / f,
            probe_radius: cfg.probe_radius / f,
            circle_radius: cfg.circle_radius / f,
        }
    }

    /// Tolerances for an eigenfunction.
    pub fn for_eigenfunction(ef: &Eigenfunction, cfg: &SearchConfig) -> Self {
        Thresholds::new(ef.lambda(), ef.sup_norm(), cfg)
    }
}

/// The critical set of an eigenfunction.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CriticalSet {
    /// Isolated critical points, sorted by location.
    pub points: Vec<CriticalPoint>,
    /// Critical circles, sorted by radius.
    pub curves: Vec<CriticalCurve>,
    /// Seeds whose Newton iteration did not converge.
    pub newton_failures: Vec<Point>,
}

impl CriticalSet {
    /// Points of a given kind.
    pub fn count_kind(&self, pred: impl Fn(CriticalKind) -> bool) -> usize {
        self.points.iter().filter(|p| pred(p.kind)).count()
    }

    /// Nearest isolated critical point to `p`.
    pub fn nearest_point(&self, p: Point) -> Option<(usize, f64)> {
        self.points
            .iter()
            .enumerate()
            .map(|(i, c)| (i, c.location.dist(p)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }
}

fn in_rank_one(eig: &[f64; 2], th: &Thresholds) -> bool {
    eig[0].abs() > th.hess_tol && eig[1].abs() <= th.hess_tol
}

/// Minimises or maximises `u` along `normal` through `base`, starting at the
/// line's own point; returns the valley value.
fn valley_value(field: &dyn ScalarField, base: Point, normal: Vec2, limit: f64) -> f64 {
    let mut s = 0.0f64;
    for _ in 0..12 {
        let jet = field.jet(base + normal * s);
        let gn = jet.gradient.dot(normal);
        let hnn = normal.dot(jet.hessian.apply(normal));
        if hnn == 0.0 {
            break;
        }
        let step = gn / hnn;
        s = (s - step).clamp(-limit, limit);
        if step.abs() < 1e-15 * limit {
            break;
        }
    }
    field.value(base + normal * s)
}

fn sign_changes_on_circle(field: &dyn ScalarField, z: Point, base: f64, r: f64, samples: usize) -> usize {
    let mut changes = 0;
    let mut first = 0.0f64;
    let mut prev = 0.0f64;
    for i in 0..samples {
        let phi = 2.0 * PI * (i as f64 + 0.5) / samples as f64;
        let d = field.value(z + Vec2::unit(phi) * r) - base;
        if d == 0.0 {
            continue;
        }
        if prev == 0.0 {
            first = d;
        } else if d.signum() != prev.signum() {
            changes += 1;
        }
        prev = d;
    }
    if prev != 0.0 && first != 0.0 && prev.signum() != first.signum() {
        changes += 1;
    }
    changes
}

/// Classifies a point with small gradient.
pub fn classify_with(field: &dyn ScalarField, z: Point, th: &Thresholds) -> CriticalKind {
    let jet = field.jet(z);
    let eig = jet.hessian.eigen();
    let [l1, l2] = eig.values;
    if l1.abs() > th.hess_tol && l2.abs() > th.hess_tol {
        return if l1 < 0.0 && l2 < 0.0 {
            CriticalKind::Max
        } else if l1 > 0.0 && l2 > 0.0 {
            CriticalKind::Min
        } else {
            CriticalKind::Saddle
        };
    }
    if in_rank_one(&eig.values, th) {
        return classify_rank_one(field, z, jet.value, l1, eig.vectors[0], eig.vectors[1], th);
    }
    let changes = sign_changes_on_circle(field, z, jet.value, th.circle_radius, 1440);
    if changes.is_multiple_of(2) && changes >= 6 && jet.value.abs() <= th.eps_val {
        CriticalKind::FullyDegenerate((changes / 2) as u32)
    } else {
        CriticalKind::Unresolved
    }
}

fn classify_rank_one(
    field: &dyn ScalarField,
    z: Point,
    u0: f64,
    l1: f64,
    normal: Vec2,
    kernel: Vec2,
    th: &Thresholds,
) -> CriticalKind {
    let r = th.probe_radius;
    let radii = [r, 0.5 * r, 0.25 * r];
    let mut plus = [0.0f64; 3];
    let mut minus = [0.0f64; 3];
    for (i, &t) in radii.iter().enumerate() {
        plus[i] = valley_value(field, z + kernel * t, normal, r) - u0;
        minus[i] = valley_value(field, z - kernel * t, normal, r) - u0;
    }
    let flat = 1e-11 * th.sup;
    if plus.iter().chain(minus.iter()).all(|d| d.abs() <= flat) {
        return if u0.abs() > th.eps_val { CriticalKind::CurvePoint } else { CriticalKind::Unresolved };
    }
    let order = |d: &[f64; 3]| -> Option<f64> {
        if d.iter().any(|v| v.abs() <= flat) {
            return None;
        }
        let s1 = (d[0].abs() / d[1].abs()).log2();
        let s2 = (d[1].abs() / d[2].abs()).log2();
        if (s1 - s2).abs() > 0.7 {
            return None;
        }
        Some(s2)
    };
    let (Some(kp), Some(km)) = (order(&plus), order(&minus)) else {
        return CriticalKind::Unresolved;
    };
    let k = (0.5 * (kp + km)).round();
    if (kp - k).abs() > 0.35 || (km - k).abs() > 0.35 || !(3.0..=7.0).contains(&k) {
        return CriticalKind::Unresolved;
    }
    let k = k as u32;
    let same_side = plus[2].signum() == minus[2].signum();
    if k % 2 == 1 {
        return if same_side { CriticalKind::Unresolved } else { CriticalKind::SaddleNode(k) };
    }
    if !same_side {
        return CriticalKind::Unresolved;
    }
    // along the kernel u moves the same way as across it: extremum
    if plus[2].signum() == l1.signum() {
        CriticalKind::SemiDegenerateExtremum(k)
    } else {
        CriticalKind::SemiDegenerateSaddle(k)
    }
}

/// Classifies a critical point of an eigenfunction.
pub fn classify_critical_point(ef: &Eigenfunction, z: Point, cfg: &SearchConfig) -> Result<CriticalKind> {
    cfg.validate()?;
    if !ef.domain().contains(z, 1e-9) {
        return Err(Error::OutsideDomain(z));
    }
    Ok(classify_with(ef, z, &Thresholds::for_eigenfunction(ef, cfg)))
}

/// Builds the record for a critical point.
pub fn describe(field: &dyn ScalarField, domain: &DomainSpec, z: Point, th: &Thresholds) -> CriticalPoint {
    let jet = field.jet(z);
    let eig = jet.hessian.eigen();
    CriticalPoint {
        location: z,
        value: jet.value,
        kind: classify_with(field, z, th),
        hessian_eigvals: eig.values,
        hessian_eigvecs: eig.vectors,
        on_boundary: domain.boundary_part_tol(z, 1e-10),
    }
}

/// Newton iteration on `grad u = 0` with a pseudo-inverse Hessian. Steps are
/// capped at `max_step`. Returns the limit and whether it is critical.
pub fn newton_polish(field: &dyn ScalarField, start: Point, th: &Thresholds, max_step: f64, iters: usize) -> (Point, bool) {
    let mut z = start;
    let floor = 1e-14 / th.frequency;
    for _ in 0..iters {
        let jet = field.jet(z);
        let g = jet.gradient;
        if g.x == 0.0 && g.y == 0.0 {
            return (z, true);
        }
        let eig = jet.hessian.eigen();
        let mut step = Vec2::ZERO;
        for i in 0..2 {
            let lam = eig.values[i];
            // pseudo-inverse drops directions the Hessian cannot resolve
            if lam.abs() > 1e-12 * th.hess_tol {
                let v = eig.vectors[i];
                step = step - v * (v.dot(g) / lam);
            }
        }
        if step.norm() == 0.0 {
            break;
        }
        let n = step.norm();
        if n > max_step {
            step = step * (max_step / n);
        }
        z = z + step;
        if !z.is_finite() {
            return (start, false);
        }
        if n < floor {
            break;
        }
    }
    let ok = field.gradient(z).norm() < th.eps_crit;
    (z, ok)
}

fn boundary_scan(ef: &Eigenfunction, th: &Thresholds, h: f64, out: &mut Vec<Point>) {
    let dom = *ef.domain();
    let per = dom.perimeter();
    let neumann = dom.has_neumann();
    let f = |s: f64| {
        let p = dom.boundary_point(s);
        let g = ef.gradient(p);
        let nrm = dom.outward_normal(p);
        if neumann {
            g.cross(nrm)
        } else {
            g.dot(nrm)
        }
    };
    let steps = (per / h).ceil() as usize;
    let ds = per / steps as f64;
    let mut s0 = 0.0;
    let mut f0 = f(0.0);
    for i in 1..=steps {
        let s1 = if i == steps { per } else { i as f64 * ds };
        let f1 = f(s1);
        if f0 == 0.0 {
            out.push(dom.boundary_point(s0));
        } else if f0.signum() != f1.signum() && f1 != 0.0 {
            let (mut a, mut b, fa) = (s0, s1, f0);
            for _ in 0..80 {
                let mid = 0.5 * (a + b);
                let fm = f(mid);
                if fm == 0.0 {
                    a = mid;
                    b = mid;
                    break;
                }
                if fm.signum() == fa.signum() {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            let p = dom.boundary_point(0.5 * (a + b));
            if ef.gradient(p).norm() < th.eps_crit {
                out.push(p);
            }
        }
        s0 = s1;
        f0 = f1;
    }
}

fn grid_seeds(ef: &Eigenfunction, h: f64) -> Vec<Point> {
    let dom = *ef.domain();
    let (lo, hi) = dom.bounding_box();
    let nx = ((hi.x - lo.x) / h).ceil() as usize;
    let ny = ((hi.y - lo.y) / h).ceil() as usize;
    let dx = (hi.x - lo.x) / nx as f64;
    let dy = (hi.y - lo.y) / ny as f64;
    let node = |i: usize, j: usize| Point::new(lo.x + i as f64 * dx, lo.y + j as f64 * dy);
    let mut prev: Vec<Vec2> = (0..=nx).map(|i| ef.gradient(node(i, 0))).collect();
    let mut seeds = Vec::new();
    let margin = 2.0 * dx.max(dy);
    for j in 1..=ny {
        let row: Vec<Vec2> = (0..=nx).map(|i| ef.gradient(node(i, j))).collect();
        for i in 0..nx {
            let c = [prev[i], prev[i + 1], row[i], row[i + 1]];
            let brackets = |f: fn(&Vec2) -> f64| {
                let mn = c.iter().map(f).fold(f64::INFINITY, f64::min);
                let mx = c.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
                mn <= 0.0 && mx >= 0.0
            };
            if brackets(|v| v.x) && brackets(|v| v.y) {
                let centre = Point::new(lo.x + (i as f64 + 0.5) * dx, lo.y + (j as f64 - 0.5) * dy);
                if dom.inset(centre) > -margin {
                    seeds.push(centre);
                }
            }
        }
        prev = row;
    }
    seeds
}

fn radial_curves(ef: &Eigenfunction) -> Result<Vec<CriticalCurve>> {
    let kappa = ef.kappa().expect("disk mode");
    let dom = *ef.domain();
    let order1 = specfun::BesselOrder::new(1)?;
    // J_0' = -J_1, so critical radii are zeros of J_1 scaled by kappa
    let zeros = specfun::zeros_below(order1, kappa * (1.0 + 1e-12), false)?;
    let mut curves = Vec::new();
    for z in zeros {
        let mut radius = z / kappa;
        if (radius - 1.0).abs() < 1e-10 {
            radius = 1.0;
        }
        let p = Point::new(radius, 0.0);
        let value = ef.value(p);
        if value.abs() <= 1e-8 * ef.sup_norm() {
            return Err(Error::ZeroValuedCurve { radius });
        }
        let sign = if ef.hessian(p).xx < 0.0 { CurveSign::MaxCurve } else { CurveSign::MinCurve };
        curves.push(CriticalCurve { radius, sign, value, on_boundary: dom.boundary_part_tol(p, 1e-10) });
    }
    Ok(curves)
}

fn dedupe(mut cands: Vec<(Point, f64, bool)>, radius: f64) -> Vec<Point> {
    // prefer explicit candidates, then smaller gradients
    cands.sort_by(|a, b| b.2.cmp(&a.2).then(a.1.total_cmp(&b.1)));
    let mut kept: Vec<Point> = Vec::new();
    for (p, _, _) in cands {
        if kept.iter().all(|q| q.dist(p) > radius) {
            kept.push(p);
        }
    }
    kept
}

/// Locates and classifies all critical points and circles of `ef`.
pub fn find_critical_points(ef: &Eigenfunction, cfg: &SearchConfig) -> Result<CriticalSet> {
    cfg.validate()?;
    let th = Thresholds::for_eigenfunction(ef, cfg);
    let dom = *ef.domain();
    let mode = ef.mode();
    let h = 2.0 * PI / (th.frequency * cfg.cells_per_wavelength);

    let mut set = CriticalSet::default();
    let radial = matches!(dom, DomainSpec::Disk(_)) && mode.n == 0;
    if radial {
        set.curves = radial_curves(ef)?;
        set.points.push(describe(ef, &dom, Point::ORIGIN, &th));
        return Ok(set);
    }

    // (point, |grad|, explicit)
    let mut cands: Vec<(Point, f64, bool)> = Vec::new();
    let mut explicit = Vec::new();
    match dom {
        DomainSpec::Rectangle { a, b } => {
            explicit.extend([Point::ORIGIN, Point::new(a, 0.0), Point::new(0.0, b), Point::new(a, b)]);
        }
        DomainSpec::Disk(_) => explicit.push(Point::ORIGIN),
    }
    for p in explicit {
        let g = ef.gradient(p).norm();
        if g < th.eps_crit {
            cands.push((p, g, true));
        }
    }
    let mut bpts = Vec::new();
    boundary_scan(ef, &th, h, &mut bpts);
    for p in bpts {
        cands.push((p, ef.gradient(p).norm(), true));
    }

    let snap = 1e-9 * dom.diameter();
    for seed in grid_seeds(ef, h) {
        let (z, ok) = newton_polish(ef, seed, &th, 2.0 * h, cfg.newton_iters);
        if !ok {
            set.newton_failures.push(seed);
            continue;
        }
        let inset = dom.inset(z);
        if inset < -snap {
            continue;
        }
        let z = if inset < snap { dom.project_to_boundary(z) } else { z };
        let g = ef.gradient(z).norm();
        if g < th.eps_crit {
            cands.push((z, g, false));
        } else {
            set.newton_failures.push(seed);
        }
    }
    // a failure near an accepted point is a slow duplicate, not a miss
    let kept = dedupe(cands, th.dedupe);
    set.newton_failures.retain(|s| kept.iter().all(|k| k.dist(*s) > 2.0 * h));

    let mut points: Vec<CriticalPoint> = kept.into_iter().map(|p| describe(ef, &dom, p, &th)).collect();
    let curve_pts: Vec<&CriticalPoint> = points.iter().filter(|p| p.kind == CriticalKind::CurvePoint).collect();
    if matches!(dom, DomainSpec::Disk(_)) && curve_pts.len() >= 3 {
        set.curves = cluster_circles(&curve_pts, &th);
        let curves = set.curves.clone();
        points.retain(|p| p.kind != CriticalKind::CurvePoint || curves.iter().all(|c| c.distance(p.location) > th.dedupe));
    }
    let key = |p: &CriticalPoint| ((p.location.x * 1e8).round() as i64, (p.location.y * 1e8).round() as i64);
    points.sort_by_key(key);
    set.points = points;
    Ok(set)
}

fn cluster_circles(pts: &[&CriticalPoint], th: &Thresholds) -> Vec<CriticalCurve> {
    let mut radii: Vec<(f64, f64, f64, BoundaryPart)> = pts
        .iter()
        .map(|p| (p.location.radius(), p.value, p.hessian_eigvals[0], p.on_boundary))
        .collect();
    radii.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut curves: Vec<CriticalCurve> = Vec::new();
    let mut members = 0usize;
    for (r, v, l, part) in radii {
        match curves.last_mut() {
            Some(c) if (c.radius - r).abs() < th.dedupe && (c.value - v).abs() < 1e-8 * th.sup => {
                members += 1;
            }
            _ => {
                if let Some(c) = curves.last() {
                    if members < 3 {
                        let r0 = c.radius;
                        curves.retain(|c| c.radius != r0);
                    }
                }
                members = 1;
                let sign = if l < 0.0 { CurveSign::MaxCurve } else { CurveSign::MinCurve };
                curves.push(CriticalCurve { radius: r, sign, value: v, on_boundary: part });
            }
        }
    }
    if members < 3 {
        curves.pop();
    }
    curves
}

/// Critical points on the zero level. Each must be a saddle-type point.
pub fn singular_set(ef: &Eigenfunction, set: &CriticalSet) -> Result<Vec<CriticalPoint>> {
    let eps = 1e-8 * ef.sup_norm();
    for c in &set.curves {
        if c.value.abs() < eps {
            return Err(Error::ZeroValuedCurve { radius: c.radius });
        }
    }
    let mut out = Vec::new();
    for p in &set.points {
        if p.value.abs() < eps {
            match p.kind {
                CriticalKind::Saddle | CriticalKind::FullyDegenerate(_) => out.push(*p),
                CriticalKind::CurvePoint => return Err(Error::ZeroValuedCurve { radius: p.location.radius() }),
                _ => return Err(Error::SingularNotSaddle(p.location)),
            }
        }
    }
    Ok(out)
}
