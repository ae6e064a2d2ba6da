//! Command-line interface.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context as _;
use clap::{Args, Parser, Subcommand, ValueEnum};

use neumann_core::asymptotics::{closed_form_count, neumann_constant, ConstantDomain};
use neumann_core::critical::{find_critical_points, CurveSign, SearchConfig};
use neumann_core::eigen::{enumerate_modes, BoundaryPart, DomainSpec, Eigenfunction, Parity};
use neumann_core::flow::{Direction, FlowConfig, FlowContext, Termination};
use neumann_core::partition::{analyze_with, verify_partition_with, CountReport, PartitionConfig};
use neumann_core::specfun::{bessel_j, bessel_j_prime, bessel_prime_zeros, bessel_zeros, BesselOrder};
use neumann_core::Point;

use crate::exec::Pool;
use crate::report::PartitionDoc;
use crate::spec::{self, parity_name, DomainArg};
use crate::svg::render_svg;

/// Exit status for success.
pub const EXIT_OK: i32 = 0;
/// Exit status for usage, input/output and numerical errors.
pub const EXIT_ERROR: i32 = 1;
/// Exit status when a verification or count comparison fails.
pub const EXIT_VERIFY: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "neumann", version, about = "Neumann domains of Laplacian eigenfunctions on rectangles and disks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the first eigenvalues of a domain.
    Modes {
        #[arg(long)]
        domain: DomainArg,
        /// Number of eigenvalues.
        #[arg(long, default_value_t = 20)]
        k: usize,
    },
    /// Bessel functions and their zeros.
    Specfun {
        #[command(subcommand)]
        op: SpecfunOp,
    },
    /// Critical points and circles of a mode, as CSV.
    Critical(ModeArgs),
    /// Gradient flow from a point.
    Flow {
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, allow_hyphen_values = true)]
        y: f64,
        #[arg(long, value_enum, default_value_t = FlowDirection::Both)]
        direction: FlowDirection,
    },
    /// Neumann partition of a mode.
    Partition {
        #[command(flatten)]
        mode: ModeArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Write the partition as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write the partition as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Check the partition properties; failures exit with status 2.
        #[arg(long)]
        verify: bool,
    },
    /// Labelled counts against the closed forms, as CSV.
    CountTable {
        #[arg(long)]
        domain: DomainArg,
        #[arg(long)]
        nmax: u32,
        #[arg(long)]
        mmax: u32,
        #[command(flatten)]
        run: RunArgs,
    },
    /// The asymptotic counting constants.
    Constants,
    /// Render a partition to SVG.
    Render {
        #[command(flatten)]
        mode: ModeArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum SpecfunOp {
    /// Positive zeros of `J_n` or `J_n'`, as CSV.
    Zeros {
        #[arg(long)]
        order: u32,
        #[arg(long, default_value_t = 5)]
        count: u32,
        /// Zeros of the derivative.
        #[arg(long)]
        derivative: bool,
    },
    /// `J_n(x)` and `J_n'(x)`.
    Eval {
        #[arg(long)]
        order: u32,
        #[arg(long)]
        x: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FlowDirection {
    Forward,
    Backward,
    Both,
}

#[derive(Debug, Args)]
struct ModeArgs {
    /// `rect:A,B`, `square`, `disk` or `disk:neumann`.
    #[arg(long)]
    domain: DomainArg,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    m: u32,
    /// Angular factor of a disk mode.
    #[arg(long, default_value = "cos", value_parser = spec::parse_parity)]
    parity: Parity,
    /// Blend angle with the transposed mode on a square.
    #[arg(long, allow_hyphen_values = true)]
    superposition: Option<f64>,
}

impl ModeArgs {
    fn eigenfunction(&self) -> anyhow::Result<Eigenfunction> {
        Ok(Eigenfunction::new(spec::mode(self.domain.0, self.n, self.m, self.parity, self.superposition)?)?)
    }
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Grid cells per unit length [default: 512, raised to the mode's floor].
    #[arg(long)]
    resolution: Option<usize>,
    /// Masked band half-width in cells.
    #[arg(long, default_value_t = 1.5)]
    line_margin: f64,
    /// Seed for the signature samples.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Relative tolerance of the flow integrator.
    #[arg(long, default_value_t = FlowConfig::default().rtol)]
    rtol: f64,
    /// Absolute tolerance of the flow integrator.
    #[arg(long, default_value_t = FlowConfig::default().atol)]
    atol: f64,
    /// Bound on |int u| / int |u| over inner domains.
    #[arg(long, default_value_t = PartitionConfig::default().int_tol)]
    int_tol: f64,
    /// Bound on the gradient misalignment along separatrices.
    #[arg(long, default_value_t = PartitionConfig::default().align_tol)]
    align_tol: f64,
}

impl RunArgs {
    fn config(&self, ef: &Eigenfunction) -> PartitionConfig {
        let base = PartitionConfig::default();
        PartitionConfig {
            resolution: self.resolution.unwrap_or_else(|| base.resolution.max(PartitionConfig::min_resolution(ef))),
            line_margin: self.line_margin,
            seed: self.seed,
            flow: FlowConfig { rtol: self.rtol, atol: self.atol, ..base.flow },
            int_tol: self.int_tol,
            align_tol: self.align_tol,
            ..base
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// writing reports to `out`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}

fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    std::fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn boundary_name(b: BoundaryPart) -> &'static str {
    match b {
        BoundaryPart::Interior => "interior",
        BoundaryPart::Dirichlet => "dirichlet",
        BoundaryPart::Neumann => "neumann",
        BoundaryPart::Exterior => "exterior",
    }
}

fn termination_text(t: &Termination, crit: &neumann_core::critical::CriticalSet) -> String {
    let at = |p: Point| format!("({}, {})", p.x, p.y);
    match *t {
        Termination::ConvergedTo(i) => {
            format!("converged to {} at {}", crit.points[i].kind.name(), at(crit.points[i].location))
        }
        Termination::StalledOnNeumann(i) => {
            format!("stalled on the Neumann boundary at {}", at(crit.points[i].location))
        }
        Termination::ConvergedToCurve { curve, at: p } => {
            format!("converged to the critical circle r = {} near {}", crit.curves[curve].radius, at(p))
        }
        Termination::HitDirichlet { t, at: p } => format!("hit the Dirichlet boundary at {} after t = {t}", at(p)),
        Termination::Budget => "step budget exhausted".to_owned(),
    }
}

fn csv_writer(out: &mut dyn Write) -> csv::Writer<&mut dyn Write> {
    csv::Writer::from_writer(out)
}

fn execute(cmd: Command, out: &mut dyn Write) -> anyhow::Result<i32> {
    match cmd {
        Command::Modes { domain, k } => {
            let mut w = csv_writer(out);
            w.write_record(["k", "n", "m", "parity", "lambda"])?;
            for (i, (mode, lambda)) in enumerate_modes(domain.0, k)?.into_iter().enumerate() {
                let parity = match mode.domain {
                    DomainSpec::Disk(_) => parity_name(mode.parity),
                    DomainSpec::Rectangle { .. } => "",
                };
                w.write_record([(i + 1).to_string(), mode.n.to_string(), mode.m.to_string(), parity.to_owned(), lambda.to_string()])?;
            }
            w.flush()?;
        }
        Command::Specfun { op: SpecfunOp::Zeros { order, count, derivative } } => {
            let n = BesselOrder::new(order)?;
            let zeros = if derivative { bessel_prime_zeros(n, count)? } else { bessel_zeros(n, count)? };
            let mut w = csv_writer(out);
            w.write_record(["n", "m", "value"])?;
            for z in zeros {
                w.write_record([z.n.to_string(), z.m.to_string(), z.value.to_string()])?;
            }
            w.flush()?;
        }
        Command::Specfun { op: SpecfunOp::Eval { order, x } } => {
            let n = BesselOrder::new(order)?;
            writeln!(out, "J_{order}({x}) = {}", bessel_j(n, x)?)?;
            writeln!(out, "J_{order}'({x}) = {}", bessel_j_prime(n, x)?)?;
        }
        Command::Critical(mode) => {
            let ef = mode.eigenfunction()?;
            let crit = find_critical_points(&ef, &SearchConfig::default())?;
            let mut w = csv_writer(out);
            w.write_record(["kind", "x", "y", "radius", "value", "eig1", "eig2", "boundary"])?;
            for p in &crit.points {
                w.write_record([
                    p.kind.name().to_owned(),
                    p.location.x.to_string(),
                    p.location.y.to_string(),
                    String::new(),
                    p.value.to_string(),
                    p.hessian_eigvals[0].to_string(),
                    p.hessian_eigvals[1].to_string(),
                    boundary_name(p.on_boundary).to_owned(),
                ])?;
            }
            for c in &crit.curves {
                let kind = match c.sign {
                    CurveSign::MaxCurve => "max-circle",
                    CurveSign::MinCurve => "min-circle",
                };
                w.write_record([
                    kind.to_owned(),
                    String::new(),
                    String::new(),
                    c.radius.to_string(),
                    c.value.to_string(),
                    String::new(),
                    String::new(),
                    boundary_name(c.on_boundary).to_owned(),
                ])?;
            }
            w.flush()?;
        }
        Command::Flow { mode, x, y, direction } => {
            let ef = mode.eigenfunction()?;
            let crit = find_critical_points(&ef, &SearchConfig::default())?;
            let ctx = FlowContext::new(&ef, &crit, FlowConfig::default())?;
            let dirs: &[(Direction, &str)] = match direction {
                FlowDirection::Forward => &[(Direction::Forward, "forward")],
                FlowDirection::Backward => &[(Direction::Backward, "backward")],
                FlowDirection::Both => &[(Direction::Forward, "forward"), (Direction::Backward, "backward")],
            };
            for &(dir, name) in dirs {
                let tr = ctx.integrate(Point::new(x, y), dir)?;
                writeln!(
                    out,
                    "{name}: {} ({} samples, length {})",
                    termination_text(&tr.termination, &crit),
                    tr.samples.len(),
                    tr.arc_length()
                )?;
            }
        }
        Command::Partition { mode, run, json, svg, verify } => {
            let ef = mode.eigenfunction()?;
            let cfg = run.config(&ef);
            let pool = Pool::from_env()?;
            let analysis = analyze_with(&ef, &cfg, &pool)?;
            let report = if verify { Some(verify_partition_with(&ef, &analysis, &cfg, &pool)?) } else { None };
            let doc = PartitionDoc::new(&ef, &analysis, report.as_ref());
            let counts = CountReport::new(&ef, &analysis.partition);
            let c = counts.labeled;
            writeln!(out, "lambda = {}", ef.lambda())?;
            writeln!(out, "domains: total {} inner {} boundary {}", c.total, c.inner, c.boundary)?;
            if let Some(f) = counts.formula {
                writeln!(out, "closed form: total {} inner {} boundary {}", f.total, f.inner, f.boundary)?;
            }
            writeln!(out, "line length = {}", doc.lines.length_total)?;
            let mut ok = counts.matches() != Some(false);
            if let Some(r) = &report {
                for cl in &r.clauses {
                    let status = if cl.passed { "pass" } else { "FAIL" };
                    writeln!(out, "({}) {status} {} [{:e}]", cl.clause.tag(), cl.clause.description(), cl.margin)?;
                }
                ok &= r.passed();
            }
            if let Some(path) = json {
                write_file(&path, &doc.to_json())?;
            }
            if let Some(path) = svg {
                write_file(&path, &render_svg(&ef, &analysis))?;
            }
            return Ok(if ok { EXIT_OK } else { EXIT_VERIFY });
        }
        Command::CountTable { domain, nmax, mmax, run } => {
            let pool = Pool::from_env()?;
            let n0 = match domain.0 {
                DomainSpec::Disk(_) => 0,
                DomainSpec::Rectangle { .. } => 1,
            };
            let mut w = csv_writer(out);
            w.write_record(["n", "m", "mu_formula", "mu_labeled", "match"])?;
            let mut ok = true;
            for n in n0..=nmax {
                for m in 1..=mmax {
                    let ef = Eigenfunction::new(spec::mode(domain.0, n, m, Parity::Cosine, None)?)?;
                    let cfg = run.config(&ef);
                    let labeled = analyze_with(&ef, &cfg, &pool)?.partition.counts().total;
                    let formula = closed_form_count(domain.0, n, m).ok().map(|c| c.total);
                    let matched = formula.map(|f| f == labeled);
                    ok &= matched != Some(false);
                    w.write_record([
                        n.to_string(),
                        m.to_string(),
                        formula.map(|f| f.to_string()).unwrap_or_default(),
                        labeled.to_string(),
                        matched.map(|b| b.to_string()).unwrap_or_default(),
                    ])?;
                    w.flush()?;
                }
            }
            return Ok(if ok { EXIT_OK } else { EXIT_VERIFY });
        }
        Command::Constants => {
            let mut ok = true;
            for (name, d) in [("rectangle", ConstantDomain::Rectangle), ("disk", ConstantDomain::Disk)] {
                let r = neumann_constant(d)?;
                ok &= r.within_tolerance();
                write!(out, "{name}: {} (reference {} +/- {:e})", r.value, r.reference_value, r.tolerance)?;
                if let Some(s) = r.maximizer {
                    write!(out, " at s = {s}")?;
                }
                writeln!(out)?;
            }
            return Ok(if ok { EXIT_OK } else { EXIT_VERIFY });
        }
        Command::Render { mode, run, out: path } => {
            let ef = mode.eigenfunction()?;
            let cfg = run.config(&ef);
            let analysis = analyze_with(&ef, &cfg, &Pool::from_env()?)?;
            write_file(&path, &render_svg(&ef, &analysis))?;
            writeln!(out, "wrote {}", path.display())?;
        }
    }
    Ok(EXIT_OK)
}
