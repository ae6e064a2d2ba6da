//! SVG rendering of a partition: dark boundary domains, light inner
//! domains, dashed nodal lines and solid Neumann lines.

use std::collections::HashMap;
use std::fmt::Write as _;

use neumann_core::eigen::{DomainSpec, Eigenfunction, ScalarField};
use neumann_core::partition::{DomainClass, NeumannAnalysis, NO_LABEL};
use neumann_core::Point;

/// Pixels per unit length of the output.
const SCALE: f64 = 400.0;

const STYLE: &str = "\
.domain{stroke:none}
.boundary{fill:#5a5a5a}
.inner{fill:#d4d4d4}
.nodal{fill:none;stroke:#000;stroke-width:0.006;stroke-dasharray:0.03 0.02}
.neumann{fill:none;stroke:#000;stroke-width:0.006;stroke-linejoin:round}
.critical-circle{fill:none;stroke:#000;stroke-width:0.006}
.outline{fill:none;stroke:#000;stroke-width:0.01}";

/// Rounds to 1e-4 and prints without trailing zeros or negative zero.
fn num(v: f64) -> String {
    let r = (v * 1e4).round() / 1e4;
    let r = if r == 0.0 { 0.0 } else { r };
    let s = format!("{r:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_owned()
}

struct Frame {
    ymax: f64,
}

impl Frame {
    fn pt(&self, p: Point) -> String {
        format!("{} {}", num(p.x), num(self.ymax - p.y))
    }
}

/// Appends `M p0 L p1 p2 ...`, dropping points that round onto their
/// predecessor.
fn polyline(d: &mut String, frame: &Frame, pts: &[Point]) {
    let mut last = String::new();
    let mut first = true;
    for &p in pts {
        let s = frame.pt(p);
        if s == last {
            continue;
        }
        d.push_str(if first { "M" } else { " L" });
        d.push_str(&s);
        last = s;
        first = false;
    }
}

/// Zero-level polylines of `u` from marching squares over the cell
/// centres of the partition grid.
fn nodal_lines(ef: &Eigenfunction, analysis: &NeumannAnalysis) -> Vec<Vec<Point>> {
    let g = &analysis.partition.grid;
    let inside = |i: usize| analysis.partition.labels[i] != NO_LABEL;
    let vals: Vec<f64> = (0..g.len()).map(|i| if inside(i) { ef.value(g.center(i)) } else { f64::NAN }).collect();
    // edge keys: (cell index, 0 = towards +x, 1 = towards +y)
    let crossing = |a: usize, b: usize| -> Option<Point> {
        let (va, vb) = (vals[a], vals[b]);
        if va.is_nan() || vb.is_nan() || (va >= 0.0) == (vb >= 0.0) {
            return None;
        }
        let t = va / (va - vb);
        let (pa, pb) = (g.center(a), g.center(b));
        Some(Point::new(pa.x + t * (pb.x - pa.x), pa.y + t * (pb.y - pa.y)))
    };
    let mut points: HashMap<(usize, u8), Point> = HashMap::new();
    let mut links: HashMap<(usize, u8), Vec<(usize, u8)>> = HashMap::new();
    for j in 0..g.ny.saturating_sub(1) {
        for i in 0..g.nx.saturating_sub(1) {
            let c00 = j * g.nx + i;
            let (c10, c01, c11) = (c00 + 1, c00 + g.nx, c00 + g.nx + 1);
            let edges = [((c00, 0u8), c00, c10), ((c00, 1), c00, c01), ((c01, 0), c01, c11), ((c10, 1), c10, c11)];
            let mut hits = Vec::with_capacity(4);
            for (key, a, b) in edges {
                if let Some(p) = crossing(a, b) {
                    points.insert(key, p);
                    hits.push(key);
                }
            }
            let pairs: &[(usize, usize)] = match hits.len() {
                2 => &[(0, 1)],
                // saddle cell: split by the sign of the centre value
                4 => {
                    let centre = 0.25 * (vals[c00] + vals[c10] + vals[c01] + vals[c11]);
                    if (centre >= 0.0) == (vals[c00] >= 0.0) {
                        &[(0, 3), (1, 2)]
                    } else {
                        &[(0, 1), (2, 3)]
                    }
                }
                _ => &[],
            };
            for &(x, y) in pairs {
                links.entry(hits[x]).or_default().push(hits[y]);
                links.entry(hits[y]).or_default().push(hits[x]);
            }
        }
    }
    let mut keys: Vec<(usize, u8)> = links.keys().copied().collect();
    keys.sort_unstable();
    // walk open chains from their ends first, then the closed loops
    keys.sort_by_key(|k| links[k].len() != 1);
    let mut used: HashMap<(usize, u8), bool> = HashMap::new();
    let mut out = Vec::new();
    for start in keys {
        if used.contains_key(&start) {
            continue;
        }
        let mut chain = vec![points[&start]];
        used.insert(start, true);
        let mut cur = start;
        while let Some(&next) = links[&cur].iter().find(|k| !used.contains_key(k)) {
            used.insert(next, true);
            chain.push(points[&next]);
            cur = next;
        }
        if links[&cur].contains(&start) && chain.len() > 2 {
            chain.push(points[&start]);
        }
        if chain.len() > 1 {
            out.push(chain);
        }
    }
    out
}

/// Renders the partition of `ef`.
pub fn render_svg(ef: &Eigenfunction, analysis: &NeumannAnalysis) -> String {
    let dom = ef.domain();
    let (lo, hi) = dom.bounding_box();
    let frame = Frame { ymax: hi.y + lo.y };
    let (w, h) = (hi.x - lo.x, hi.y - lo.y);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="{} {} {} {}">"#,
        num(w * SCALE),
        num(h * SCALE),
        num(lo.x),
        num(lo.y),
        num(w),
        num(h)
    );
    let _ = writeln!(s, "<style>\n{STYLE}\n</style>");

    // domains: one path per domain built from horizontal runs of cells
    let p = &analysis.partition;
    let g = &p.grid;
    let mut paths = vec![String::new(); p.domains.len()];
    for j in 0..g.ny {
        let mut i = 0;
        while i < g.nx {
            let l = p.labels[j * g.nx + i];
            let start = i;
            while i < g.nx && p.labels[j * g.nx + i] == l {
                i += 1;
            }
            if l == NO_LABEL {
                continue;
            }
            let x0 = g.lo.x + start as f64 * g.h;
            let x1 = g.lo.x + i as f64 * g.h;
            let y0 = g.lo.y + j as f64 * g.h;
            let y1 = y0 + g.h;
            let d = &mut paths[l as usize];
            let _ = write!(
                d,
                "M{}H{}V{}H{}Z",
                frame.pt(Point::new(x0, y0)),
                num(x1),
                num(frame.ymax - y1),
                num(x0)
            );
        }
    }
    let _ = writeln!(s, r#"<g shape-rendering="crispEdges">"#);
    for (dm, d) in p.domains.iter().zip(&paths) {
        let class = match dm.class {
            DomainClass::Boundary => "boundary",
            DomainClass::Inner => "inner",
        };
        let _ = writeln!(s, r#"<path class="domain {class}" data-id="{}" d="{d}"/>"#, dm.id);
    }
    let _ = writeln!(s, "</g>");

    // nodal lines
    let mut d = String::new();
    for line in nodal_lines(ef, analysis) {
        polyline(&mut d, &frame, &line);
    }
    if !d.is_empty() {
        let _ = writeln!(s, r#"<path class="nodal" d="{d}"/>"#);
    }

    // Neumann lines: separatrices, critical circles and the Neumann boundary
    let mut d = String::new();
    for line in analysis.lines.polylines() {
        polyline(&mut d, &frame, line);
    }
    if !d.is_empty() {
        let _ = writeln!(s, r#"<path class="neumann" d="{d}"/>"#);
    }
    for c in &analysis.lines.critical_curves {
        let _ = writeln!(s, r#"<circle class="critical-circle" cx="0" cy="0" r="{}"/>"#, num(c.radius));
    }
    let class = if dom.has_neumann() { "neumann" } else { "outline" };
    match *dom {
        DomainSpec::Rectangle { a, b } => {
            let _ = writeln!(s, r#"<path class="{class}" d="M0 0H{}V{}H0Z"/>"#, num(a), num(b));
        }
        DomainSpec::Disk(_) => {
            let _ = writeln!(s, r#"<path class="{class}" d="M-1 0A1 1 0 0 1 1 0A1 1 0 0 1 -1 0Z"/>"#);
        }
    }
    s.push_str("</svg>\n");
    s
}
