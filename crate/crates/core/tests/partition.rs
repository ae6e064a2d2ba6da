use std::f64::consts::PI;

use neumann_core::asymptotics::{closed_form_count, nodal_count, Counts};
use neumann_core::critical::{find_critical_points, CriticalKind, SearchConfig};
use neumann_core::eigen::{BoundaryPart, DiskBoundary, DomainSpec, Eigenfunction, ModeSpec, Parity, ScalarField};
use neumann_core::flow::{FlowConfig, FlowContext, Termination};
use neumann_core::partition::{
    analyze, count_domains, label_domains, neumann_line_set, separatrices, verify_partition, Clause, DomainClass,
    DomainSign, PartitionConfig, SignatureClass, SignatureMap, NO_LABEL,
};
use neumann_core::specfun::{bessel_prime_zero, bessel_zero, BesselOrder};
use neumann_core::Point;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rect(a: f64, b: f64, n: u32, m: u32) -> Eigenfunction {
    Eigenfunction::new(ModeSpec::rectangle(a, b, n, m).unwrap()).unwrap()
}

fn disk(n: u32, m: u32) -> Eigenfunction {
    Eigenfunction::new(ModeSpec::disk(DiskBoundary::Dirichlet, n, m, Parity::Cosine).unwrap()).unwrap()
}

fn neumann_disk(n: u32, m: u32) -> Eigenfunction {
    Eigenfunction::new(ModeSpec::disk(DiskBoundary::Neumann, n, m, Parity::Cosine).unwrap()).unwrap()
}

fn cfg() -> PartitionConfig {
    PartitionConfig::default()
}

#[test]
fn figure_mode_on_the_two_by_one_rectangle() {
    let report = count_domains(&rect(2.0, 1.0, 3, 2), &cfg()).unwrap();
    assert_eq!(report.labeled, Counts { total: 17, inner: 7, boundary: 10 });
    assert_eq!(report.matches(), Some(true));
}

#[test]
fn disk_counts_follow_the_closed_form() {
    for (n, m, total) in [(1, 2, 7), (0, 3, 3), (2, 2, 16), (3, 2, 24)] {
        let report = count_domains(&disk(n, m), &cfg()).unwrap();
        assert_eq!(report.labeled.total, total, "u_{n}{m}");
        assert_eq!(report.matches(), Some(true), "u_{n}{m}");
    }
}

#[test]
fn first_rectangle_mode_has_four_boundary_domains() {
    let ef = rect(2.0, 1.0, 1, 1);
    let a = analyze(&ef, &cfg()).unwrap();
    assert_eq!(a.partition.counts(), Counts { total: 4, inner: 0, boundary: 4 });
    let max = a.critical.points.iter().position(|p| p.kind == CriticalKind::Max).unwrap();
    // the only interior critical point is the maximum; every separatrix joins it
    assert_eq!(a.critical.points.iter().filter(|p| p.on_boundary == BoundaryPart::Interior).count(), 1);
    for s in &a.lines.separatrices {
        assert_eq!(s.terminus(), Termination::ConvergedTo(max));
    }
    let r = verify_partition(&ef, &a, &cfg()).unwrap();
    assert!(r.get(Clause::InnerSignChanging).unwrap().passed);
}

#[test]
fn saddles_of_the_figure_mode_emit_four_rays_on_the_gradient_axes() {
    let ef = rect(2.0, 1.0, 3, 2);
    let crit = find_critical_points(&ef, &SearchConfig::default()).unwrap();
    let seps = separatrices(&ef, &crit, &Default::default()).unwrap();
    let interior_saddles: Vec<usize> = crit
        .points
        .iter()
        .enumerate()
        .filter(|(_, p)| p.kind == CriticalKind::Saddle && p.on_boundary == BoundaryPart::Interior)
        .map(|(i, _)| i)
        .collect();
    // nodal crossings at (2/3, 1/2) and (4/3, 1/2)
    let mut crossings = 0;
    for &i in &interior_saddles {
        let rays: Vec<_> = seps.iter().filter(|s| s.saddle == i).collect();
        assert_eq!(rays.len(), 4);
        assert_eq!(rays.iter().filter(|s| s.branch == neumann_core::partition::Branch::Stable).count(), 2);
        let z = crit.points[i].location;
        if ef.value(z).abs() < 1e-12 {
            crossings += 1;
            // at a nodal crossing the gradient axes are the diagonals
            for s in rays {
                let d = s.seed - z;
                assert!((d.x.abs() - d.y.abs()).abs() < 1e-3 * d.norm(), "{d:?}");
            }
        }
    }
    assert_eq!(crossings, 2);
}

#[test]
fn origin_of_u31_emits_six_rays() {
    let ef = disk(3, 1);
    let crit = find_critical_points(&ef, &SearchConfig::default()).unwrap();
    let (o, _) = crit.nearest_point(Point::ORIGIN).unwrap();
    assert_eq!(crit.points[o].kind, CriticalKind::FullyDegenerate(3));
    let seps = separatrices(&ef, &crit, &Default::default()).unwrap();
    let mut angles: Vec<f64> = seps.iter().filter(|s| s.saddle == o).map(|s| s.seed.angle().rem_euclid(2.0 * PI)).collect();
    assert_eq!(angles.len(), 6);
    angles.sort_by(f64::total_cmp);
    for w in angles.windows(2) {
        assert!((w[1] - w[0] - PI / 3.0).abs() < 1e-6, "{angles:?}");
    }
}

#[test]
fn radial_modes_have_no_separatrices() {
    let ef = disk(0, 2);
    let a = analyze(&ef, &cfg()).unwrap();
    assert!(a.lines.separatrices.is_empty());
    assert_eq!(a.lines.critical_curves.len(), 1);
    assert_eq!(a.lines.isolated_points.len(), 1);
    assert!(a.lines.isolated_points[0].radius() < 1e-12);
    let rho = bessel_prime_zero(BesselOrder::new(0).unwrap(), 1).unwrap().value
        / bessel_zero(BesselOrder::new(0).unwrap(), 2).unwrap().value;
    assert!((a.lines.critical_curves[0].radius - rho).abs() < 1e-8);
    assert_eq!(a.partition.counts(), Counts { total: 2, inner: 1, boundary: 1 });
}

/// Simpson rule on `[a, b]` with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// `J_0` by its power series.
fn j0(x: f64) -> f64 {
    let (mut term, mut sum) = (1.0, 1.0);
    for k in 1..60 {
        term *= -(x * x) / (4.0 * (k * k) as f64);
        sum += term;
    }
    sum
}

#[test]
fn inner_disk_of_u02_has_vanishing_integral() {
    let ef = disk(0, 2);
    let a = analyze(&ef, &cfg()).unwrap();
    let inner: Vec<_> = a.partition.domains.iter().filter(|d| d.class == DomainClass::Inner).collect();
    assert_eq!(inner.len(), 1);
    let d = inner[0];
    let j = bessel_zero(BesselOrder::new(0).unwrap(), 2).unwrap().value;
    let rho = bessel_prime_zero(BesselOrder::new(0).unwrap(), 1).unwrap().value / j;
    // radial oracle for the area and the L1 mass of the profile
    let scale = ef.value(Point::ORIGIN);
    let abs = 2.0 * PI * simpson(|r| (scale * j0(j * r)).abs() * r, 0.0, rho, 20_000);
    assert!((d.area - PI * rho * rho).abs() < 1e-4, "{} vs {}", d.area, PI * rho * rho);
    assert!((d.abs_integral - abs).abs() < 1e-3 * abs);
    assert!(d.integral.abs() < 1e-3 * d.abs_integral);
    assert_eq!(d.sign.sign(), DomainSign::Mixed);
}

#[test]
fn neumann_boundary_lies_in_the_line_set() {
    let ef = neumann_disk(1, 1);
    let a = analyze(&ef, &cfg()).unwrap();
    assert!(!a.lines.neumann_boundary.is_empty());
    for k in 0..200 {
        let p = Point::polar(1.0, k as f64 * 2.0 * PI / 200.0);
        assert!(a.lines.distance(p) < 1e-12);
    }
    let r = verify_partition(&ef, &a, &cfg()).unwrap();
    assert!(r.get(Clause::NeumannBoundaryInLines).unwrap().passed);
    assert_eq!(a.partition.counts().boundary, 0);
}

#[test]
fn figure_mode_passes_every_clause() {
    let ef = rect(2.0, 1.0, 3, 2);
    let a = analyze(&ef, &cfg()).unwrap();
    let r = verify_partition(&ef, &a, &cfg()).unwrap();
    assert_eq!(r.clauses.len(), 8);
    for c in &r.clauses {
        assert!(c.passed, "({}) {} margin {:e} at {:?}", c.clause.tag(), c.clause.description(), c.margin, c.witness);
    }
    for d in &a.partition.domains {
        match d.class {
            DomainClass::Inner => assert_eq!(d.sign.sign(), DomainSign::Mixed),
            DomainClass::Boundary => assert_ne!(d.sign.sign(), DomainSign::Mixed),
        }
    }
}

#[test]
fn labels_agree_with_flow_signatures() {
    let ef = rect(2.0, 1.0, 3, 2);
    let c = cfg();
    let a = analyze(&ef, &c).unwrap();
    let p = &a.partition;
    let map = SignatureMap::new(*ef.domain(), &a.critical, &a.lines);
    let ctx = FlowContext::new(&ef, &a.critical, FlowConfig::default()).unwrap();
    let class = |i: usize| {
        let s = ctx.limit_signature(p.grid.center(i)).unwrap();
        SignatureClass { alpha: map.terminus(s.alpha), omega: map.terminus(s.omega) }
    };
    let labeled: Vec<usize> = (0..p.grid.len()).filter(|&i| p.labels[i] != NO_LABEL && !p.near_line[i]).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut pairs = 0;
    while pairs < 1000 {
        let i = labeled[rng.random_range(0..labeled.len())];
        let j = labeled[rng.random_range(0..labeled.len())];
        if p.labels[i] != p.labels[j] {
            continue;
        }
        assert_eq!(class(i), class(j), "{:?} {:?}", p.grid.center(i), p.grid.center(j));
        assert_eq!(class(i), p.domains[p.labels[i] as usize].signature);
        pairs += 1;
    }
}

#[test]
fn counts_survive_grid_doubling() {
    for ef in [rect(2.0, 1.0, 2, 3), disk(2, 1), neumann_disk(2, 1)] {
        let a = analyze(&ef, &cfg()).unwrap();
        let fine = PartitionConfig { resolution: 1024, ..cfg() };
        let b = label_domains(&ef, &a.critical, &a.lines, &fine).unwrap();
        assert_eq!(a.partition.counts(), b.counts(), "{:?}", ef.mode());
    }
}

#[test]
fn at_least_half_as_many_neumann_as_nodal_domains() {
    let modes = [(rect(2.0, 1.0, 4, 3), DomainSpec::rectangle(2.0, 1.0).unwrap(), 4, 3), (disk(1, 3), DomainSpec::Disk(DiskBoundary::Dirichlet), 1, 3), (disk(2, 2), DomainSpec::Disk(DiskBoundary::Dirichlet), 2, 2)];
    for (ef, dom, n, m) in modes {
        let mu = count_domains(&ef, &cfg()).unwrap().labeled.total;
        let nodal = nodal_count(dom, n, m).unwrap();
        assert!(2 * mu >= nodal, "{mu} {nodal}");
        assert_eq!(Some(mu), closed_form_count(dom, n, m).ok().map(|c| c.total));
    }
}

#[test]
fn separatrices_end_at_critical_points_or_the_dirichlet_boundary() {
    for ef in [rect(2.0, 1.0, 3, 2), disk(3, 1), disk(1, 2), neumann_disk(2, 2)] {
        let crit = find_critical_points(&ef, &SearchConfig::default()).unwrap();
        let seps = separatrices(&ef, &crit, &Default::default()).unwrap();
        let lines = neumann_line_set(*ef.domain(), &crit, seps);
        for s in &lines.separatrices {
            let end = *s.polyline.last().unwrap();
            match s.terminus() {
                Termination::ConvergedTo(i) | Termination::StalledOnNeumann(i) => {
                    assert_eq!(end, crit.points[i].location);
                    assert_ne!(i, s.saddle);
                }
                Termination::ConvergedToCurve { curve, .. } => {
                    assert!(crit.curves[curve].distance(end) < 1e-9);
                }
                Termination::HitDirichlet { at, .. } => {
                    assert_eq!(ef.domain().boundary_part_tol(at, 1e-9), BoundaryPart::Dirichlet);
                }
                Termination::Budget => panic!("budget"),
            }
            assert_eq!(s.polyline[0], crit.points[s.saddle].location);
        }
    }
}

#[test]
fn resolution_floor_is_enforced() {
    let ef = rect(2.0, 1.0, 6, 6);
    let low = PartitionConfig { resolution: PartitionConfig::min_resolution(&ef) - 1, ..cfg() };
    assert!(analyze(&ef, &low).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn counts_do_not_depend_on_the_sampling_seed(seed in any::<u64>()) {
        let ef = rect(2.0, 1.0, 2, 2);
        let c = PartitionConfig { seed, ..cfg() };
        prop_assert_eq!(count_domains(&ef, &c).unwrap().labeled, Counts { total: 12, inner: 4, boundary: 8 });
    }
}
