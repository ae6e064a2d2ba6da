use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float as _;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::lines::{segment_distance, NeumannLineSet};
use super::PartitionConfig;
use crate::asymptotics::Counts;
use crate::critical::{CriticalSet, SearchConfig, Thresholds};
use crate::eigen::{BoundaryPart, DomainSpec, Eigenfunction, ScalarField};
use crate::exec::Executor;
use crate::flow::{FlowContext, Termination};
use crate::{Error, Point, Result};

/// Marker for cells outside the domain or without a label.
pub const NO_LABEL: u32 = u32::MAX;

/// Uniform cell grid over the bounding box of a domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    /// Lower-left corner.
    pub lo: Point,
    /// Cell width.
    pub h: f64,
    /// Cells per row.
    pub nx: usize,
    /// Rows.
    pub ny: usize,
}

impl Grid {
    /// Grid with `resolution` cells per unit length.
    pub fn new(domain: &DomainSpec, resolution: usize) -> Self {
        let (lo, hi) = domain.bounding_box();
        let n = resolution as f64;
        let nx = ((hi.x - lo.x) * n - 1e-9).ceil().max(1.0) as usize;
        let ny = ((hi.y - lo.y) * n - 1e-9).ceil().max(1.0) as usize;
        Grid { lo, h: 1.0 / n, nx, ny }
    }

    /// Number of cells.
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    /// Whether the grid has no cells.
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Centre of cell `idx` (row-major from the lower-left corner).
    pub fn center(&self, idx: usize) -> Point {
        let (i, j) = (idx % self.nx, idx / self.nx);
        Point::new(self.lo.x + (i as f64 + 0.5) * self.h, self.lo.y + (j as f64 + 0.5) * self.h)
    }

    /// Cell containing `p`.
    pub fn index_of(&self, p: Point) -> Option<usize> {
        let i = ((p.x - self.lo.x) / self.h).floor();
        let j = ((p.y - self.lo.y) / self.h).floor();
        if i < 0.0 || j < 0.0 || i >= self.nx as f64 || j >= self.ny as f64 {
            return None;
        }
        Some(j as usize * self.nx + i as usize)
    }

    fn neighbours(&self, idx: usize) -> impl Iterator<Item = usize> + '_ {
        let (i, j) = ((idx % self.nx) as isize, (idx / self.nx) as isize);
        let (nx, ny) = (self.nx as isize, self.ny as isize);
        (-1isize..=1)
            .flat_map(move |dj| (-1isize..=1).map(move |di| (i + di, j + dj)))
            .filter(move |&(a, b)| (a, b) != (i, j) && a >= 0 && b >= 0 && a < nx && b < ny)
            .map(move |(a, b)| (b * nx + a) as usize)
    }
}

/// Where one end of a flow line goes, with Dirichlet hits collapsed to the
/// boundary segment they land on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Terminus {
    /// An isolated critical point.
    Critical(usize),
    /// A critical circle.
    Curve(usize),
    /// A Dirichlet boundary segment between consecutive feet.
    Dirichlet(usize),
    /// The integrator ran out of steps.
    Unresolved,
}

/// Signature-equivalence class of a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignatureClass {
    /// `t -> -inf` end.
    pub alpha: Terminus,
    /// `t -> +inf` end.
    pub omega: Terminus,
}

impl SignatureClass {
    /// Whether either end reaches the Dirichlet boundary.
    pub fn is_boundary(&self) -> bool {
        matches!(self.alpha, Terminus::Dirichlet(_)) || matches!(self.omega, Terminus::Dirichlet(_))
    }

    /// Whether both ends were resolved.
    pub fn is_resolved(&self) -> bool {
        self.alpha != Terminus::Unresolved && self.omega != Terminus::Unresolved
    }
}

/// Inner or boundary domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DomainClass {
    /// No flow line reaches the Dirichlet boundary.
    Inner,
    /// Flow lines reach the Dirichlet boundary in finite time.
    Boundary,
}

/// Overall sign of `u` on a domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DomainSign {
    /// Only positive samples.
    Positive,
    /// Only negative samples.
    Negative,
    /// Both signs occur.
    Mixed,
    /// No sample above the value threshold.
    Zero,
}

/// Sign statistics over the cells of a domain away from the line set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignProfile {
    /// Cells with `u > eps_val`.
    pub positive: usize,
    /// Cells with `u < -eps_val`.
    pub negative: usize,
    /// Largest sampled value.
    pub max: f64,
    /// Smallest sampled value.
    pub min: f64,
}

impl SignProfile {
    fn empty() -> Self {
        SignProfile { positive: 0, negative: 0, max: f64::NEG_INFINITY, min: f64::INFINITY }
    }

    /// Summary sign.
    pub fn sign(&self) -> DomainSign {
        match (self.positive > 0, self.negative > 0) {
            (true, true) => DomainSign::Mixed,
            (true, false) => DomainSign::Positive,
            (false, true) => DomainSign::Negative,
            (false, false) => DomainSign::Zero,
        }
    }
}

/// One labelled Neumann domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    /// Label stored in the grid.
    pub id: usize,
    /// Inner or boundary.
    pub class: DomainClass,
    /// Common signature of its sampled points.
    pub signature: SignatureClass,
    /// Cells after filling the line margin.
    pub cells: usize,
    /// Area estimate.
    pub area: f64,
    /// Sign statistics.
    pub sign: SignProfile,
    /// Cell-sum estimate of the integral of `u`.
    pub integral: f64,
    /// Cell-sum estimate of the integral of `|u|`.
    pub abs_integral: f64,
    /// A cell centre inside the domain.
    pub witness: Point,
}

/// Grid labelling of the Neumann domains.
#[derive(Debug, Clone, PartialEq)]
pub struct NeumannPartition {
    /// The grid.
    pub grid: Grid,
    /// Domain label per cell, [`NO_LABEL`] outside the domain.
    pub labels: Vec<u32>,
    /// Cells within the line margin; their labels come from the nearest
    /// labelled cell.
    pub near_line: Vec<bool>,
    /// The domains, ordered by their first cell.
    pub domains: Vec<Domain>,
    /// Flow signatures evaluated.
    pub evaluated: usize,
    /// Signatures that hit the step budget.
    pub unresolved: usize,
    /// Cells whose label came from per-cell signatures.
    pub fallback_cells: usize,
}

impl NeumannPartition {
    /// Inner, boundary and total counts.
    pub fn counts(&self) -> Counts {
        let inner = self.domains.iter().filter(|d| d.class == DomainClass::Inner).count() as u64;
        Counts::new(inner, self.domains.len() as u64 - inner)
    }

    /// Domain of the cell containing `p`, unless that cell is outside or
    /// near the line set.
    pub fn label_at(&self, p: Point) -> Option<usize> {
        let idx = self.grid.index_of(p)?;
        if self.near_line[idx] || self.labels[idx] == NO_LABEL {
            None
        } else {
            Some(self.labels[idx] as usize)
        }
    }
}

/// Maps flow terminations to signature classes.
#[derive(Debug, Clone)]
pub struct SignatureMap {
    domain: DomainSpec,
    feet: Vec<f64>,
}

impl SignatureMap {
    /// Segment boundaries are the Dirichlet critical points and the
    /// separatrix feet.
    pub fn new(domain: DomainSpec, crit: &CriticalSet, lines: &NeumannLineSet) -> Self {
        let mut feet: Vec<f64> = crit
            .points
            .iter()
            .filter(|p| p.on_boundary == BoundaryPart::Dirichlet)
            .map(|p| p.location)
            .chain(lines.feet.iter().copied())
            .map(|p| domain.boundary_coordinate(p))
            .collect();
        feet.sort_by(f64::total_cmp);
        let tol = 1e-9 * domain.perimeter();
        feet.dedup_by(|a, b| (*a - *b).abs() < tol);
        SignatureMap { domain, feet }
    }

    /// Number of Dirichlet segments.
    pub fn segments(&self) -> usize {
        self.feet.len().max(1)
    }

    /// Segment of a Dirichlet boundary point.
    pub fn segment(&self, p: Point) -> usize {
        let s = self.domain.boundary_coordinate(p);
        let k = self.feet.partition_point(|&f| f < s);
        if k == self.feet.len() {
            0
        } else {
            k
        }
    }

    /// Class of one termination.
    pub fn terminus(&self, t: Termination) -> Terminus {
        match t {
            Termination::ConvergedTo(i) | Termination::StalledOnNeumann(i) => Terminus::Critical(i),
            Termination::ConvergedToCurve { curve, .. } => Terminus::Curve(curve),
            Termination::HitDirichlet { at, .. } => Terminus::Dirichlet(self.segment(at)),
            Termination::Budget => Terminus::Unresolved,
        }
    }
}

struct Labeler<'a, E: Executor> {
    ctx: FlowContext<'a>,
    map: SignatureMap,
    grid: Grid,
    exec: &'a E,
}

impl<E: Executor> Labeler<'_, E> {
    fn signatures(&self, cells: &[u32]) -> Result<Vec<SignatureClass>> {
        let sig = self.exec.map(cells.len(), |k| self.ctx.limit_signature(self.grid.center(cells[k] as usize)));
        sig.into_iter()
            .map(|s| {
                s.map(|s| SignatureClass { alpha: self.map.terminus(s.alpha), omega: self.map.terminus(s.omega) })
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy)]
enum Feature {
    Segment(Point, Point),
    Circle(f64),
    Dot(Point),
}

impl Feature {
    fn distance(&self, p: Point) -> f64 {
        match *self {
            Feature::Segment(a, b) => segment_distance(p, a, b),
            Feature::Circle(r) => (p.radius() - r).abs(),
            Feature::Dot(q) => p.dist(q),
        }
    }

    /// Whether the segment `p q` crosses this feature.
    fn crosses(&self, p: Point, q: Point) -> bool {
        match *self {
            Feature::Segment(a, b) => {
                let side = |o: Point, x: Point, y: Point| (x - o).cross(y - o);
                let (d1, d2) = (side(a, b, p), side(a, b, q));
                let (d3, d4) = (side(p, q, a), side(p, q, b));
                // touching counts as crossing
                d1 * d2 <= 0.0 && d3 * d4 <= 0.0
            }
            Feature::Circle(r) => {
                let (rp, rq) = (p.radius(), q.radius());
                (rp - r) * (rq - r) <= 0.0 || (rp > r && rq > r && segment_distance(Point::ORIGIN, p, q) <= r)
            }
            Feature::Dot(_) => false,
        }
    }

    /// Distance from `p` and the unit normal pointing from `p` towards the
    /// feature, so that `p` lies on the inner side.
    fn offset(&self, p: Point) -> (f64, crate::Vec2) {
        let q = self.probe(p, 0.0);
        let v = q - p;
        let d = v.norm();
        let n = if d > 0.0 {
            v * (1.0 / d)
        } else {
            match *self {
                Feature::Segment(a, b) => (b - a).perp().normalized(),
                _ => p.to_vec().normalized(),
            }
        };
        (d, n)
    }

    /// Point at signed distance `probe` from the feature, positive on the
    /// side of `p`.
    fn probe(&self, p: Point, probe: f64) -> Point {
        match *self {
            Feature::Segment(a, b) => {
                let ab = b - a;
                let l2 = ab.dot(ab);
                let t = if l2 > 0.0 { ((p - a).dot(ab) / l2).clamp(0.0, 1.0) } else { 0.0 };
                let foot = a + ab * t;
                let mut n = (p - foot).normalized();
                if n.norm() == 0.0 {
                    n = ab.perp().normalized();
                }
                foot + n * probe
            }
            Feature::Circle(r) => {
                let rho = p.radius();
                let target = if rho > r { r + probe } else { (r - probe).max(0.0) };
                if rho > 0.0 {
                    Point::new(p.x * target / rho, p.y * target / rho)
                } else {
                    p
                }
            }
            Feature::Dot(_) => p,
        }
    }
}

/// Line-set features near each cell.
struct Band {
    features: Vec<Feature>,
    /// Sorted `(cell, feature)` pairs within the refinement radius.
    pairs: Vec<(u32, u32)>,
}

impl Band {
    fn near(&self, cell: usize) -> &[(u32, u32)] {
        let c = cell as u32;
        let lo = self.pairs.partition_point(|&(a, _)| a < c);
        let hi = self.pairs.partition_point(|&(a, _)| a <= c);
        &self.pairs[lo..hi]
    }
}

/// Masks cells within `r` of the line set and records features within
/// `reach` of each cell.
fn rasterize(grid: &Grid, inside: &[bool], lines: &NeumannLineSet, r: f64, reach: f64) -> (Vec<bool>, Band) {
    let mut features = Vec::new();
    for line in lines.polylines() {
        for w in line.windows(2) {
            features.push(Feature::Segment(w[0], w[1]));
        }
    }
    for c in &lines.critical_curves {
        features.push(Feature::Circle(c.radius));
    }
    for &q in &lines.isolated_points {
        features.push(Feature::Dot(q));
    }
    let mut mask = vec![false; grid.len()];
    let mut pairs = Vec::new();
    let cell_range = |lo: f64, hi: f64, origin: f64, n: usize| {
        let a = (((lo - origin) / grid.h).floor() as isize).max(0) as usize;
        let b = (((hi - origin) / grid.h).ceil() as isize).clamp(0, n as isize) as usize;
        (a, b)
    };
    let w = r.max(reach);
    for (k, f) in features.iter().enumerate() {
        let (lo, hi) = match *f {
            Feature::Segment(a, b) => (Point::new(a.x.min(b.x), a.y.min(b.y)), Point::new(a.x.max(b.x), a.y.max(b.y))),
            Feature::Circle(rad) => (Point::new(-rad, -rad), Point::new(rad, rad)),
            Feature::Dot(q) => (q, q),
        };
        let (i0, i1) = cell_range(lo.x - w, hi.x + w, grid.lo.x, grid.nx);
        let (j0, j1) = cell_range(lo.y - w, hi.y + w, grid.lo.y, grid.ny);
        for j in j0..j1 {
            for i in i0..i1 {
                let idx = j * grid.nx + i;
                let d = f.distance(grid.center(idx));
                if d < r && inside[idx] {
                    mask[idx] = true;
                }
                if d < reach && !matches!(f, Feature::Dot(_)) {
                    pairs.push((idx as u32, k as u32));
                }
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    (mask, Band { features, pairs })
}

/// 8-connected components of the cells selected by `keep`, grouped by
/// `key`. Returns the component index per cell and the cells of each
/// component.
fn components<K: PartialEq>(grid: &Grid, keep: &[bool], key: impl Fn(usize) -> K) -> (Vec<u32>, Vec<Vec<u32>>) {
    let mut comp = vec![NO_LABEL; grid.len()];
    let mut groups = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..grid.len() {
        if !keep[start] || comp[start] != NO_LABEL {
            continue;
        }
        let id = groups.len() as u32;
        let k0 = key(start);
        let mut cells = Vec::new();
        comp[start] = id;
        queue.push_back(start);
        while let Some(c) = queue.pop_front() {
            cells.push(c as u32);
            for nb in grid.neighbours(c) {
                if keep[nb] && comp[nb] == NO_LABEL && key(nb) == k0 {
                    comp[nb] = id;
                    queue.push_back(nb);
                }
            }
        }
        groups.push(cells);
    }
    (comp, groups)
}

/// Exact fraction of a square of side `delta` lying on the inner side of a
/// straight line at signed distance `d` from its centre (positive inside),
/// with outward unit normal `n`.
fn coverage(d: f64, n: crate::Vec2, delta: f64) -> f64 {
    let (mut p, mut q) = ((n.x * delta).abs(), (n.y * delta).abs());
    if p < q {
        core::mem::swap(&mut p, &mut q);
    }
    let s = d + 0.5 * (p + q);
    if s <= 0.0 {
        0.0
    } else if s >= p + q {
        1.0
    } else if q <= 1e-15 * delta {
        (s / p).clamp(0.0, 1.0)
    } else if s <= q {
        s * s / (2.0 * p * q)
    } else if s <= p {
        (s - 0.5 * q) / p
    } else {
        1.0 - (p + q - s) * (p + q - s) / (2.0 * p * q)
    }
}

struct Quad {
    label: u32,
    area: f64,
    integral: f64,
    abs_integral: f64,
}

/// Midpoint-rule integrals of `u` and `|u|` per domain. Cells near the line
/// set or the boundary are split into `sub x sub` subcells. A subcell in the
/// band takes the label of the closest unmasked cell reachable along a
/// straight segment that crosses no line, and asks `resolve` when there is
/// none.
#[allow(clippy::too_many_arguments)]
fn integrate<E: Executor>(
    ef: &Eigenfunction,
    grid: &Grid,
    labels: &[u32],
    near_line: &[bool],
    band: &Band,
    window: isize,
    sub: usize,
    resolve: &(dyn Fn(Point) -> Option<u32> + Sync),
    exec: &E,
) -> Vec<Vec<Quad>> {
    let dom = ef.domain();
    let h = grid.h;
    let sub = sub.max(1);
    let mut offsets: Vec<(isize, isize)> =
        (-window..=window).flat_map(|j| (-window..=window).map(move |i| (i, j))).collect();
    offsets.sort_by_key(|&(i, j)| i * i + j * j);
    let visible = |p: Point, near: &[(u32, u32)]| -> Option<u32> {
        let ci = ((p.x - grid.lo.x) / h).floor() as isize;
        let cj = ((p.y - grid.lo.y) / h).floor() as isize;
        offsets.iter().find_map(|&(di, dj)| {
            let (i, j) = (ci + di, cj + dj);
            if i < 0 || j < 0 || i >= grid.nx as isize || j >= grid.ny as isize {
                return None;
            }
            let idx = j as usize * grid.nx + i as usize;
            if near_line[idx] || labels[idx] == NO_LABEL {
                return None;
            }
            let r = grid.center(idx);
            let clear = !near.iter().any(|&(_, k)| band.features[k as usize].crosses(p, r));
            clear.then_some(labels[idx])
        })
    };
    exec.map(grid.ny, |j| {
        let mut out: Vec<Quad> = Vec::new();
        let mut add = |label: u32, w: f64, u: f64| {
            if label == NO_LABEL {
                return;
            }
            match out.iter_mut().find(|q| q.label == label) {
                Some(q) => {
                    q.area += w;
                    q.integral += w * u;
                    q.abs_integral += w * u.abs();
                }
                None => out.push(Quad { label, area: w, integral: w * u, abs_integral: w * u.abs() }),
            }
        };
        for i in 0..grid.nx {
            let idx = j * grid.nx + i;
            let c = grid.center(idx);
            let inset = dom.inset(c);
            let edge = inset.abs() < 0.75 * h;
            if inset <= 0.0 && !edge {
                continue;
            }
            if !edge && !near_line[idx] {
                add(labels[idx], h * h, ef.value(c));
                continue;
            }
            let near = band.near(idx);
            // points of this cell whose label is known, shared by every
            // subcell that sees them
            let mut known: Vec<(Point, u32)> = Vec::new();
            let mut label_of = |p: Point| {
                if !near_line[idx] && labels[idx] != NO_LABEL {
                    return labels[idx];
                }
                let q = if dom.inset(p) > 0.0 { p } else { p - dom.outward_normal(p) * (1e-9 * h - dom.inset(p)) };
                let clear = |r: Point| !near.iter().any(|&(_, k)| band.features[k as usize].crosses(q, r));
                if let Some(&(_, l)) = known.iter().find(|&&(r, _)| clear(r)) {
                    return l;
                }
                let l = visible(q, near).or_else(|| resolve(q)).unwrap_or(labels[idx]);
                known.push((q, l));
                l
            };
            let delta = h / sub as f64;
            let w = delta * delta;
            for b in 0..sub {
                for a in 0..sub {
                    let p = Point::new(
                        c.x + ((a as f64 + 0.5) / sub as f64 - 0.5) * h,
                        c.y + ((b as f64 + 0.5) / sub as f64 - 0.5) * h,
                    );
                    let cover = if edge { coverage(dom.inset(p), dom.outward_normal(p), delta) } else { 1.0 };
                    if cover <= 0.0 {
                        continue;
                    }
                    let u = ef.value(p);
                    let nearest = near
                        .iter()
                        .map(|&(_, k)| &band.features[k as usize])
                        .map(|f| (f.offset(p), f))
                        .min_by(|x, y| x.0 .0.total_cmp(&y.0 .0));
                    match nearest {
                        Some(((d, normal), _)) if d < delta => {
                            // the line may split this subcell
                            let frac = coverage(d, normal, delta);
                            add(label_of(p - normal * (0.25 * delta)), cover * frac * w, u);
                            if frac < 1.0 {
                                add(label_of(p + normal * (d + 0.25 * delta)), cover * (1.0 - frac) * w, u);
                            }
                        }
                        _ => add(label_of(p), cover * w, u),
                    }
                }
            }
        }
        out
    })
}

/// Labels the Neumann domains on a grid with `cfg.resolution` cells per
/// unit length.
pub fn label_domains_with<E: Executor>(
    ef: &Eigenfunction,
    crit: &CriticalSet,
    lines: &NeumannLineSet,
    cfg: &PartitionConfig,
    exec: &E,
) -> Result<NeumannPartition> {
    cfg.validate_for(ef)?;
    let dom = *ef.domain();
    let grid = Grid::new(&dom, cfg.resolution);
    let n = grid.len();
    let inside: Vec<bool> = (0..n).map(|i| dom.inset(grid.center(i)) > 0.0).collect();
    let margin = cfg.line_margin * grid.h;
    let window = (cfg.line_margin.ceil() as isize) + 1;
    let reach = (core::f64::consts::SQRT_2 * (window + 1) as f64 + 1.0) * grid.h;
    let (mut mask, band) = rasterize(&grid, &inside, lines, margin, reach);

    let free: Vec<bool> = (0..n).map(|i| inside[i] && !mask[i]).collect();
    let (_, groups) = components(&grid, &free, |_| ());

    let lab = Labeler {
        ctx: FlowContext::new(ef, crit, cfg.flow)?,
        map: SignatureMap::new(dom, crit, lines),
        grid,
        exec,
    };

    // sample signatures of every sizeable component
    let mut jobs: Vec<u32> = Vec::new();
    let mut owner: Vec<usize> = Vec::new();
    let mut kept: Vec<usize> = Vec::new();
    for (g, cells) in groups.iter().enumerate() {
        if cells.len() < cfg.min_component_cells {
            for &c in cells {
                mask[c as usize] = true;
            }
            continue;
        }
        kept.push(g);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (g as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        for _ in 0..cfg.samples_per_domain.min(cells.len()) {
            jobs.push(cells[rng.random_range(0..cells.len())]);
            owner.push(g);
        }
    }
    let sampled = lab.signatures(&jobs)?;
    let mut evaluated = sampled.len();
    let mut unresolved = sampled.iter().filter(|s| !s.is_resolved()).count();

    let mut labels = vec![NO_LABEL; n];
    let mut signatures: Vec<SignatureClass> = Vec::new();
    let mut fallback_cells = 0usize;
    for &g in &kept {
        let mut classes = sampled.iter().zip(&owner).filter(|(s, &o)| o == g && s.is_resolved()).map(|(s, _)| *s);
        let first = classes.next();
        let uniform = first.is_some() && classes.all(|s| Some(s) == first);
        if uniform {
            let id = signatures.len() as u32;
            signatures.push(first.unwrap_or(SignatureClass { alpha: Terminus::Unresolved, omega: Terminus::Unresolved }));
            for &c in &groups[g] {
                labels[c as usize] = id;
            }
            continue;
        }
        // disagreeing samples: label this component cell by cell
        let cells = &groups[g];
        let per_cell = lab.signatures(cells)?;
        evaluated += per_cell.len();
        fallback_cells += per_cell.len();
        let mut class_of = vec![None; n];
        for (&c, s) in cells.iter().zip(&per_cell) {
            if s.is_resolved() {
                class_of[c as usize] = Some(*s);
            } else {
                unresolved += 1;
                mask[c as usize] = true;
            }
        }
        let keep: Vec<bool> = (0..n).map(|i| class_of[i].is_some()).collect();
        let (_, sub) = components(&grid, &keep, |i| class_of[i]);
        for cells in sub {
            if cells.len() < cfg.min_component_cells {
                for &c in &cells {
                    mask[c as usize] = true;
                }
                continue;
            }
            let id = signatures.len() as u32;
            signatures.push(class_of[cells[0] as usize].expect("kept cells are resolved"));
            for &c in &cells {
                labels[c as usize] = id;
            }
        }
    }
    if evaluated > 0 && unresolved as f64 > cfg.budget_tol * evaluated as f64 {
        return Err(Error::UnresolvedSignatures { unresolved, total: evaluated });
    }

    // hand each masked cell the label of the nearest labelled cell
    let mut queue: VecDeque<usize> = (0..n).filter(|&i| labels[i] != NO_LABEL).collect();
    while let Some(c) = queue.pop_front() {
        let l = labels[c];
        for nb in grid.neighbours(c) {
            if inside[nb] && labels[nb] == NO_LABEL {
                labels[nb] = l;
                queue.push_back(nb);
            }
        }
    }
    let near_line: Vec<bool> = (0..n).map(|i| inside[i] && mask[i]).collect();

    let mut centroids = vec![(Point::ORIGIN, 0.0f64); signatures.len()];
    for idx in (0..n).filter(|&i| labels[i] != NO_LABEL && !near_line[i]) {
        let (c, k) = &mut centroids[labels[idx] as usize];
        let q = grid.center(idx);
        *c = Point::new(c.x + q.x, c.y + q.y);
        *k += 1.0;
    }
    let resolve = |p: Point| -> Option<u32> {
        let sig = lab.ctx.limit_signature(p).ok()?;
        let class = SignatureClass { alpha: lab.map.terminus(sig.alpha), omega: lab.map.terminus(sig.omega) };
        // a class shared by several components goes to the closest one
        signatures
            .iter()
            .enumerate()
            .filter(|(i, s)| **s == class && centroids[*i].1 > 0.0)
            .map(|(i, _)| {
                let (c, k) = centroids[i];
                (i as u32, p.dist(Point::new(c.x / k, c.y / k)))
            })
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(i, _)| i)
    };
    let sums = integrate(ef, &grid, &labels, &near_line, &band, window, cfg.quadrature_subdivisions, &resolve, exec);
    let mut domains: Vec<Domain> = signatures
        .iter()
        .enumerate()
        .map(|(id, s)| Domain {
            id,
            class: if s.is_boundary() { DomainClass::Boundary } else { DomainClass::Inner },
            signature: *s,
            cells: 0,
            area: 0.0,
            sign: SignProfile::empty(),
            integral: 0.0,
            abs_integral: 0.0,
            witness: Point::ORIGIN,
        })
        .collect();
    for row in &sums {
        for q in row {
            let d = &mut domains[q.label as usize];
            d.area += q.area;
            d.integral += q.integral;
            d.abs_integral += q.abs_integral;
        }
    }
    let th = Thresholds::for_eigenfunction(ef, &SearchConfig::default());
    for idx in 0..n {
        if labels[idx] == NO_LABEL {
            continue;
        }
        let d = &mut domains[labels[idx] as usize];
        d.cells += 1;
        if near_line[idx] {
            continue;
        }
        let u = ef.value(grid.center(idx));
        let s = &mut d.sign;
        if s.max == f64::NEG_INFINITY {
            d.witness = grid.center(idx);
        }
        if u > th.eps_val {
            s.positive += 1;
        } else if u < -th.eps_val {
            s.negative += 1;
        }
        s.max = s.max.max(u);
        s.min = s.min.min(u);
    }
    Ok(NeumannPartition { grid, labels, near_line, domains, evaluated, unresolved, fallback_cells })
}
