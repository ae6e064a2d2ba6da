//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use neumann::exec::Pool;
use neumann::spec::PHI;
use neumann_core::asymptotics::{
    closed_form_count, is_morse, neumann_constant, nodal_count, ratio_series, tail_max, weyl_tail_max,
    ConstantDomain, Counts,
};
use neumann_core::critical::CriticalKind;
use neumann_core::eigen::{DiskBoundary, DomainSpec, Eigenfunction, ModeSpec, Parity, ScalarField};
use neumann_core::flow::{Direction, FlowConfig, FlowContext, Termination};
use neumann_core::partition::{analyze_with, verify_partition_with, NeumannAnalysis, PartitionConfig, VerificationReport};
use neumann_core::specfun::{bessel_prime_zeros, bessel_zero, bessel_zeros, mccann_bound, BesselOrder};
use neumann_core::Point;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Run {
    ef: Eigenfunction,
    analysis: NeumannAnalysis,
    report: VerificationReport,
    elapsed: Duration,
}

impl Run {
    fn mode(&self) -> &ModeSpec {
        self.ef.mode()
    }

    fn counts(&self) -> Counts {
        self.analysis.partition.counts()
    }

    fn name(&self) -> String {
        let m = self.mode();
        match m.domain {
            DomainSpec::Rectangle { a, b } => format!("R({a:.4},{b:.4}) u_{},{}", m.n, m.m),
            DomainSpec::Disk(DiskBoundary::Dirichlet) => format!("disk u_{},{}", m.n, m.m),
            DomainSpec::Disk(DiskBoundary::Neumann) => format!("Neumann disk u_{},{}", m.n, m.m),
        }
    }
}

struct Outcome {
    passed: usize,
    failed: usize,
}

impl Outcome {
    fn report(&mut self, id: u32, title: &str, passed: bool, detail: String) {
        let status = if passed { "PASS" } else { "FAIL" };
        println!("criterion {id:>2} [{status}] {title}: {detail}");
        if passed {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
    }
}

fn run_mode(mode: ModeSpec, pool: &Pool) -> Run {
    let ef = Eigenfunction::new(mode).expect("valid mode");
    let cfg = PartitionConfig::default();
    let t = Instant::now();
    let analysis = analyze_with(&ef, &cfg, pool).unwrap_or_else(|e| panic!("{mode:?}: {e}"));
    let elapsed = t.elapsed();
    let report = verify_partition_with(&ef, &analysis, &cfg, pool).unwrap_or_else(|e| panic!("{mode:?}: {e}"));
    Run { ef, analysis, report, elapsed }
}

fn rectangle_modes(a: f64, b: f64) -> Vec<ModeSpec> {
    (1..=6).flat_map(|n| (1..=6).map(move |m| ModeSpec::rectangle(a, b, n, m).unwrap())).collect()
}

fn disk_modes(bc: DiskBoundary, nmax: u32, mmax: u32) -> Vec<ModeSpec> {
    (0..=nmax).flat_map(|n| (1..=mmax).map(move |m| ModeSpec::disk(bc, n, m, Parity::Cosine).unwrap())).collect()
}

fn random_interior(domain: &DomainSpec, rng: &mut ChaCha8Rng) -> Point {
    let (lo, hi) = domain.bounding_box();
    loop {
        let p = Point::new(rng.random_range(lo.x..hi.x), rng.random_range(lo.y..hi.y));
        if domain.inset(p) > 1e-6 {
            return p;
        }
    }
}

#[derive(Default)]
struct FlowStats {
    trajectories: usize,
    violations: usize,
    worst_rise: f64,
    neumann_crossings: usize,
    budget: usize,
}

fn flow_suite(run: &Run, stats: &mut FlowStats) {
    let ef = &run.ef;
    let sup = ef.sup_norm();
    let ctx = FlowContext::new(ef, &run.analysis.critical, FlowConfig::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ ((ef.mode().n as u64) << 8 | ef.mode().m as u64));
    for k in 0..500 {
        let z = random_interior(ef.domain(), &mut rng);
        let dir = if k % 2 == 0 { Direction::Forward } else { Direction::Backward };
        let tr = ctx.integrate(z, dir).unwrap_or_else(|e| panic!("{}: {e}", run.name()));
        stats.trajectories += 1;
        let sign = if dir == Direction::Forward { 1.0 } else { -1.0 };
        let mut bad = false;
        for w in tr.samples.windows(2) {
            let rise = sign * (ef.value(w[1].1) - ef.value(w[0].1)) / sup;
            stats.worst_rise = stats.worst_rise.max(rise);
            bad |= rise > 1e-12;
        }
        stats.violations += bad as usize;
        stats.neumann_crossings += tr.neumann_crossing as usize;
        stats.budget += (tr.termination == Termination::Budget) as usize;
    }
}

fn main() {
    let pool = Pool::from_env().expect("thread pool");
    let mut out = Outcome { passed: 0, failed: 0 };

    // every partition is computed and verified once and shared below
    let mut rect_runs = Vec::new();
    for (a, b) in [(2.0, 1.0), (1.0, PHI)] {
        for mode in rectangle_modes(a, b) {
            rect_runs.push(run_mode(mode, &pool));
        }
    }
    let disk_runs: Vec<Run> =
        disk_modes(DiskBoundary::Dirichlet, 5, 3).into_iter().map(|m| run_mode(m, &pool)).collect();
    let neumann_runs: Vec<Run> =
        disk_modes(DiskBoundary::Neumann, 2, 2).into_iter().map(|m| run_mode(m, &pool)).collect();
    let all: Vec<&Run> = rect_runs.iter().chain(&disk_runs).chain(&neumann_runs).collect();

    // 1
    let mut bad = Vec::new();
    let mut slowest = Duration::ZERO;
    for r in &rect_runs {
        let (n, m) = (r.mode().n as u64, r.mode().m as u64);
        let want = Counts { total: 2 * n * m + n + m, inner: n * (m - 1) + (n - 1) * m, boundary: 2 * n + 2 * m };
        if r.counts() != want {
            bad.push(format!("{} gave {:?}", r.name(), r.counts()));
        }
        slowest = slowest.max(r.elapsed);
    }
    out.report(
        1,
        "rectangle counts",
        bad.is_empty() && slowest <= Duration::from_secs(120),
        format!("{}/{} modes exact, slowest {:.2?} {}", rect_runs.len() - bad.len(), rect_runs.len(), slowest, bad.join("; ")),
    );

    // 2
    let fig = rect_runs.iter().find(|r| r.mode().n == 3 && r.mode().m == 2).unwrap();
    let c = fig.counts();
    out.report(
        2,
        "R(2,1) u_3,2",
        c.boundary == 10 && c.inner == 7,
        format!("{} boundary, {} inner", c.boundary, c.inner),
    );

    // 3
    let mut bad = Vec::new();
    for r in disk_runs.iter().filter(|r| r.mode().m <= 3) {
        let (n, m) = (r.mode().n as u64, r.mode().m as u64);
        let want = match n {
            0 => m,
            1 => 4 * m - 1,
            2 => 8 * m,
            _ => 4 * n * m,
        };
        if r.counts().total != want {
            bad.push(format!("{} gave {} want {want}", r.name(), r.counts().total));
        }
    }
    out.report(
        3,
        "disk counts",
        bad.is_empty(),
        format!("{}/{} modes exact {}", disk_runs.len() - bad.len(), disk_runs.len(), bad.join("; ")),
    );

    // 4
    let t = Instant::now();
    let rect_c = neumann_constant(ConstantDomain::Rectangle).unwrap();
    let disk_c = neumann_constant(ConstantDomain::Disk).unwrap();
    let el = t.elapsed();
    let ok = (rect_c.value - 4.0 / PI).abs() <= 1e-12 && (disk_c.value - 0.9226).abs() <= 5e-4 && el < Duration::from_secs(1);
    out.report(4, "constants", ok, format!("4/pi -> {}, disk -> {}, {:.2?}", rect_c.value, disk_c.value, el));

    // 5
    let t = Instant::now();
    let disk_series = ratio_series(DomainSpec::Disk(DiskBoundary::Dirichlet), 2000).unwrap();
    let rect_dom = DomainSpec::rectangle(1.0, PHI).unwrap();
    let rect_series = ratio_series(rect_dom, 2000).unwrap();
    let el = t.elapsed();
    let dmax = disk_series.last().unwrap().running_max;
    let rmax = rect_series.last().unwrap().running_max;
    let ok = (0.80..=0.9726).contains(&dmax) && (1.12..=1.33).contains(&rmax) && el < Duration::from_secs(10);
    out.report(
        5,
        "ratio series running max",
        ok,
        format!(
            "disk {dmax} (tail k>=1000: {:.4}, Weyl-normalised {:.4}), rectangle {rmax} (tail {:.4}, Weyl {:.4}), {:.2?}",
            tail_max(&disk_series, 1000),
            weyl_tail_max(DomainSpec::Disk(DiskBoundary::Dirichlet), &disk_series, 1000),
            tail_max(&rect_series, 1000),
            weyl_tail_max(rect_dom, &rect_series, 1000),
            el
        ),
    );

    // 6
    let ord = |n| BesselOrder::new(n).unwrap();
    let mut mccann_ok = true;
    for n in 0..=20 {
        for z in bessel_zeros(ord(n), 20).unwrap() {
            mccann_ok &= z.value > mccann_bound(n, z.m);
        }
    }
    let oracle = {
        let j0 = |x: f64| {
            let q = -(x * x) / 4.0;
            let (mut t, mut s) = (1.0f64, 1.0f64);
            for k in 1..60 {
                t *= q / (k * k) as f64;
                s += t;
            }
            s
        };
        let (mut lo, mut hi) = (2.0f64, 3.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if j0(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };
    let j01 = bessel_zero(ord(0), 1).unwrap().value;
    let mut interlace = true;
    for n in 0..=5 {
        let z = bessel_zeros(ord(n), 20).unwrap();
        let zp = bessel_prime_zeros(ord(n), 20).unwrap();
        for k in 0..19 {
            interlace &= if n == 0 {
                z[k].value < zp[k].value && zp[k].value < z[k + 1].value
            } else {
                zp[k].value < z[k].value && z[k].value < zp[k + 1].value
            };
        }
    }
    out.report(
        6,
        "Bessel layer",
        mccann_ok && (j01 - oracle).abs() < 1e-10 && interlace,
        format!("McCann {mccann_ok}, |j_0,1 - oracle| = {:e}, interlacing {interlace}", (j01 - oracle).abs()),
    );

    // 7
    let mut bad = Vec::new();
    let mut worst = [0.0f64; 8];
    for r in &all {
        for (i, c) in r.report.clauses.iter().enumerate() {
            if !c.passed {
                bad.push(format!("{} ({}) {:e}", r.name(), c.clause.tag(), c.margin));
            }
            if i != 1 {
                worst[i] = worst[i].max(c.margin);
            }
        }
    }
    out.report(
        7,
        "partition properties",
        bad.is_empty(),
        format!(
            "{} modes, worst |int u|/int|u| {:.2e}, alignment {:.2e}, Neumann boundary {:.1e}, length change {:.1e} {}",
            all.len(),
            worst[3],
            worst[4],
            worst[5],
            worst[7],
            bad.join("; ")
        ),
    );

    // 8
    let mut stats = FlowStats::default();
    for r in &all {
        flow_suite(r, &mut stats);
    }
    let rate = stats.budget as f64 / stats.trajectories as f64;
    out.report(
        8,
        "flow suite",
        stats.violations == 0 && stats.neumann_crossings == 0 && rate < 1e-3,
        format!(
            "{} trajectories, {} monotonicity violations (worst rise {:.1e} sup), {} Neumann crossings, budget rate {:.2e}",
            stats.trajectories, stats.violations, stats.worst_rise, stats.neumann_crossings, rate
        ),
    );

    // 9
    let u31 = disk_runs.iter().find(|r| r.mode().n == 3 && r.mode().m == 1).unwrap();
    let (o, _) = u31.analysis.critical.nearest_point(Point::ORIGIN).unwrap();
    let kind = u31.analysis.critical.points[o].kind;
    let rays = u31.analysis.lines.separatrices.iter().filter(|s| s.saddle == o).count();
    let u02 = disk_runs.iter().find(|r| r.mode().n == 0 && r.mode().m == 2).unwrap();
    let rho = bessel_prime_zeros(ord(0), 1).unwrap()[0].value / bessel_zero(ord(0), 2).unwrap().value;
    let circle_err = match u02.analysis.critical.curves.as_slice() {
        [c] => (c.radius - rho).abs(),
        _ => f64::INFINITY,
    };
    let unresolved: usize = all
        .iter()
        .filter(|r| closed_form_count(r.mode().domain, r.mode().n, r.mode().m).is_ok())
        .map(|r| r.analysis.critical.count_kind(|k| k == CriticalKind::Unresolved))
        .sum();
    out.report(
        9,
        "degenerate points",
        kind == CriticalKind::FullyDegenerate(3) && rays == 6 && circle_err < 1e-8 && unresolved == 0,
        format!("u_3,1 origin {kind:?} with {rays} rays, u_0,2 circle error {circle_err:e}, {unresolved} unresolved"),
    );

    // 10
    let mut bad = Vec::new();
    let mut checked = 0;
    for r in rect_runs.iter().chain(&disk_runs) {
        let m = r.mode();
        if !is_morse(m.domain, m.n) {
            continue;
        }
        checked += 1;
        let nodal = nodal_count(m.domain, m.n, m.m).unwrap();
        if 2 * r.counts().total < nodal {
            bad.push(format!("{} mu {} nodal {nodal}", r.name(), r.counts().total));
        }
    }
    out.report(
        10,
        "mu >= nodal / 2",
        bad.is_empty(),
        format!("{checked} Morse modes {}", bad.join("; ")),
    );

    println!("{} passed, {} failed", out.passed, out.failed);
    if out.failed > 0 {
        std::process::exit(1);
    }
}
