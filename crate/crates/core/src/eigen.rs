//! Domains, boundary splits and closed-form eigenfunctions.
//!
//! Rectangles `(0, a) x (0, b)` carry Dirichlet conditions on every edge and
//! the modes `sin(pi n x / a) sin(pi m y / b)`. The unit disk carries either
//! Dirichlet or Neumann conditions and the modes `J_n(kappa r) cos(n t)` or
//! `J_n(kappa r) sin(n t)`. Disk modes are scaled to unit sup-norm.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float as _;

use crate::specfun::{self, BesselOrder};
use crate::{Error, Point, Result, Sym2, Vec2};

/// Tolerance used to decide that a point lies on the boundary.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Tolerance for accepting evaluation points slightly outside the closure.
const CLOSURE_TOL: f64 = 1e-9;

/// Boundary condition imposed on the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiskBoundary {
    /// `u = 0` on the circle.
    Dirichlet,
    /// `du/dn = 0` on the circle.
    Neumann,
}

/// A supported planar domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainSpec {
    /// `(0, a) x (0, b)` with Dirichlet conditions on all edges.
    Rectangle {
        /// Width.
        a: f64,
        /// Height.
        b: f64,
    },
    /// The unit disk centred at the origin.
    Disk(DiskBoundary),
}

/// Location of a point relative to the boundary split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryPart {
    /// Open domain.
    Interior,
    /// On the Dirichlet part of the boundary.
    Dirichlet,
    /// On the Neumann part of the boundary.
    Neumann,
    /// Outside the closed domain.
    Exterior,
}

impl DomainSpec {
    /// A validated rectangle.
    pub fn rectangle(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidDomain("rectangle sides must be positive and finite"));
        }
        Ok(DomainSpec::Rectangle { a, b })
    }

    /// Checks the invariants of a value built directly from the enum.
    pub fn validate(&self) -> Result<()> {
        match *self {
            DomainSpec::Rectangle { a, b } => DomainSpec::rectangle(a, b).map(|_| ()),
            DomainSpec::Disk(_) => Ok(()),
        }
    }

    /// Area of the domain.
    pub fn area(&self) -> f64 {
        match *self {
            DomainSpec::Rectangle { a, b } => a * b,
            DomainSpec::Disk(_) => PI,
        }
    }

    /// Diameter of the domain.
    pub fn diameter(&self) -> f64 {
        match *self {
            DomainSpec::Rectangle { a, b } => (a * a + b * b).sqrt(),
            DomainSpec::Disk(_) => 2.0,
        }
    }

    /// Perimeter of the domain.
    pub fn perimeter(&self) -> f64 {
        match *self {
            DomainSpec::Rectangle { a, b } => 2.0 * (a + b),
            DomainSpec::Disk(_) => 2.0 * PI,
        }
    }

    /// Axis-aligned bounding box as `(min, max)`.
    pub fn bounding_box(&self) -> (Point, Point) {
        match *self {
            DomainSpec::Rectangle { a, b } => (Point::ORIGIN, Point::new(a, b)),
            DomainSpec::Disk(_) => (Point::new(-1.0, -1.0), Point::new(1.0, 1.0)),
        }
    }

    /// Whether the domain is a square rectangle.
    pub fn is_square(&self) -> bool {
        matches!(*self, DomainSpec::Rectangle { a, b } if a == b)
    }

    /// Whether the boundary has a Dirichlet part.
    pub fn has_dirichlet(&self) -> bool {
        !matches!(self, DomainSpec::Disk(DiskBoundary::Neumann))
    }

    /// Whether the boundary has a Neumann part.
    pub fn has_neumann(&self) -> bool {
        matches!(self, DomainSpec::Disk(DiskBoundary::Neumann))
    }

    /// Signed distance to the boundary, positive inside.
    pub fn inset(&self, p: Point) -> f64 {
        match *self {
            DomainSpec::Rectangle { a, b } => p.x.min(a - p.x).min(p.y).min(b - p.y),
            DomainSpec::Disk(_) => 1.0 - p.radius(),
        }
    }

    /// Whether `p` lies in the closed domain up to `tol`.
    pub fn contains(&self, p: Point, tol: f64) -> bool {
        p.is_finite() && self.inset(p) >= -tol
    }

    /// Classifies `p` with boundary tolerance [`BOUNDARY_TOL`].
    pub fn boundary_part(&self, p: Point) -> BoundaryPart {
        self.boundary_part_tol(p, BOUNDARY_TOL)
    }

    /// Classifies `p` with a caller-supplied boundary tolerance.
    pub fn boundary_part_tol(&self, p: Point, tol: f64) -> BoundaryPart {
        let d = self.inset(p);
        if !p.is_finite() || d < -tol {
            BoundaryPart::Exterior
        } else if d > tol {
            BoundaryPart::Interior
        } else if self.has_neumann() {
            BoundaryPart::Neumann
        } else {
            BoundaryPart::Dirichlet
        }
    }

    /// Nearest boundary point.
    pub fn project_to_boundary(&self, p: Point) -> Point {
        match *self {
            DomainSpec::Rectangle { a, b } => {
                let x = p.x.clamp(0.0, a);
                let y = p.y.clamp(0.0, b);
                let d = [x, a - x, y, b - y];
                let mut k = 0;
                for i in 1..4 {
                    if d[i] < d[k] {
                        k = i;
                    }
                }
                match k {
                    0 => Point::new(0.0, y),
                    1 => Point::new(a, y),
                    2 => Point::new(x, 0.0),
                    _ => Point::new(x, b),
                }
            }
            DomainSpec::Disk(_) => {
                let r = p.radius();
                if r == 0.0 {
                    Point::new(1.0, 0.0)
                } else {
                    Point::new(p.x / r, p.y / r)
                }
            }
        }
    }

    /// Outward unit normal at the boundary point nearest to `p`. At a
    /// rectangle corner the diagonal direction is returned.
    pub fn outward_normal(&self, p: Point) -> Vec2 {
        match *self {
            DomainSpec::Rectangle { a, b } => {
                let q = self.project_to_boundary(p);
                let tol = 1e-9 * a.max(b);
                let mut v = Vec2::ZERO;
                if q.x <= tol {
                    v.x -= 1.0;
                }
                if q.x >= a - tol {
                    v.x += 1.0;
                }
                if q.y <= tol {
                    v.y -= 1.0;
                }
                if q.y >= b - tol {
                    v.y += 1.0;
                }
                v.normalized()
            }
            DomainSpec::Disk(_) => self.project_to_boundary(p).to_vec(),
        }
    }

    /// Position of a boundary point along the boundary, in `[0, perimeter)`.
    /// Rectangles are traversed counter-clockwise from the origin; the circle
    /// from angle zero.
    pub fn boundary_coordinate(&self, p: Point) -> f64 {
        match *self {
            DomainSpec::Rectangle { a, b } => {
                let q = self.project_to_boundary(p);
                let tol = 1e-12 * a.max(b);
                if q.y <= tol && q.x < a - tol {
                    q.x
                } else if q.x >= a - tol && q.y < b - tol {
                    a + q.y
                } else if q.y >= b - tol && q.x > tol {
                    a + b + (a - q.x)
                } else {
                    2.0 * a + b + (b - q.y)
                }
            }
            DomainSpec::Disk(_) => {
                let t = p.angle();
                if t < 0.0 {
                    t + 2.0 * PI
                } else {
                    t
                }
            }
        }
    }

    /// Boundary point at coordinate `s` (inverse of [`Self::boundary_coordinate`]).
    pub fn boundary_point(&self, s: f64) -> Point {
        let s = num_traits::Euclid::rem_euclid(&s, &self.perimeter());
        match *self {
            DomainSpec::Rectangle { a, b } => {
                if s < a {
                    Point::new(s, 0.0)
                } else if s < a + b {
                    Point::new(a, s - a)
                } else if s < 2.0 * a + b {
                    Point::new(a - (s - a - b), b)
                } else {
                    Point::new(0.0, b - (s - 2.0 * a - b))
                }
            }
            DomainSpec::Disk(_) => Point::polar(1.0, s),
        }
    }
}

/// Angular factor of a disk mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    /// `cos(n t)`.
    Cosine,
    /// `sin(n t)`.
    Sine,
}

/// Domain plus eigenfunction index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSpec {
    /// Domain and boundary split.
    pub domain: DomainSpec,
    /// First index (`x` frequency, or angular order on the disk).
    pub n: u32,
    /// Second index (`y` frequency, or radial rank on the disk).
    pub m: u32,
    /// Angular factor; ignored for rectangles.
    pub parity: Parity,
    /// Blend `cos(a) u_{n,m} + sin(a) u_{m,n}` on a square.
    pub superposition: Option<f64>,
}

impl ModeSpec {
    /// Rectangle mode `u_{n,m}`.
    pub fn rectangle(a: f64, b: f64, n: u32, m: u32) -> Result<Self> {
        let mode = ModeSpec {
            domain: DomainSpec::rectangle(a, b)?,
            n,
            m,
            parity: Parity::Cosine,
            superposition: None,
        };
        mode.validate()?;
        Ok(mode)
    }

    /// Disk mode of order `n` and radial rank `m`.
    pub fn disk(bc: DiskBoundary, n: u32, m: u32, parity: Parity) -> Result<Self> {
        let mode = ModeSpec { domain: DomainSpec::Disk(bc), n, m, parity, superposition: None };
        mode.validate()?;
        Ok(mode)
    }

    /// The same mode blended with its transpose on a square.
    pub fn with_superposition(mut self, alpha: f64) -> Result<Self> {
        self.superposition = Some(alpha);
        self.validate()?;
        Ok(self)
    }

    /// Checks all invariants.
    pub fn validate(&self) -> Result<()> {
        self.domain.validate()?;
        if self.m == 0 {
            return Err(Error::InvalidMode("m must be at least 1"));
        }
        match self.domain {
            DomainSpec::Rectangle { .. } => {
                if self.n == 0 {
                    return Err(Error::InvalidMode("rectangle modes need n >= 1"));
                }
            }
            DomainSpec::Disk(_) => {
                if self.n > specfun::MAX_ORDER {
                    return Err(Error::OrderOutOfRange(self.n));
                }
                if self.m > specfun::MAX_RANK {
                    return Err(Error::RankOutOfRange(self.m));
                }
                if self.parity == Parity::Sine && self.n == 0 {
                    return Err(Error::InvalidMode("sine parity needs n >= 1"));
                }
            }
        }
        if let Some(alpha) = self.superposition {
            if !self.domain.is_square() {
                return Err(Error::InvalidMode("superposition needs a square"));
            }
            if self.n == self.m {
                return Err(Error::InvalidMode("superposition needs n != m"));
            }
            if !(0.0..=PI / 2.0).contains(&alpha) {
                return Err(Error::InvalidMode("superposition angle must lie in [0, pi/2]"));
            }
        }
        Ok(())
    }
}

/// Value, gradient and Hessian at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    /// `u`.
    pub value: f64,
    /// `grad u`.
    pub gradient: Vec2,
    /// Hessian of `u`.
    pub hessian: Sym2,
}

/// A smooth planar field with analytic derivatives. Methods do not check
/// that the point lies in any domain.
pub trait ScalarField: Sync {
    /// Value, gradient and Hessian together.
    fn jet(&self, p: Point) -> Jet;

    /// `u(p)`.
    fn value(&self, p: Point) -> f64 {
        self.jet(p).value
    }

    /// `grad u(p)`.
    fn gradient(&self, p: Point) -> Vec2 {
        self.jet(p).gradient
    }

    /// Hessian of `u` at `p`.
    fn hessian(&self, p: Point) -> Sym2 {
        self.jet(p).hessian
    }
}

#[derive(Debug, Clone, Copy)]
struct SineTerm {
    coef: f64,
    kx: f64,
    ky: f64,
}

#[derive(Debug, Clone)]
enum Kernel {
    Rect(Vec<SineTerm>),
    Disk { n: u32, kappa: f64, scale: f64, sine: bool },
}

/// A closed-form eigenfunction bound to its eigenvalue.
#[derive(Debug, Clone)]
pub struct Eigenfunction {
    mode: ModeSpec,
    lambda: f64,
    sup_norm: f64,
    kernel: Kernel,
}

impl Eigenfunction {
    /// Builds the eigenfunction of `mode`.
    pub fn new(mode: ModeSpec) -> Result<Self> {
        mode.validate()?;
        match mode.domain {
            DomainSpec::Rectangle { a, b } => {
                let (n, m) = (mode.n as f64, mode.m as f64);
                let lambda = PI * PI * (n * n / (a * a) + m * m / (b * b));
                let mut terms = Vec::new();
                let (c, s) = match mode.superposition {
                    Some(alpha) => (alpha.cos(), alpha.sin()),
                    None => (1.0, 0.0),
                };
                if c != 0.0 {
                    terms.push(SineTerm { coef: c, kx: PI * n / a, ky: PI * m / b });
                }
                if s != 0.0 {
                    terms.push(SineTerm { coef: s, kx: PI * m / a, ky: PI * n / b });
                }
                let mut ef = Eigenfunction {
                    mode,
                    lambda,
                    sup_norm: 1.0,
                    kernel: Kernel::Rect(terms),
                };
                if mode.superposition.is_some() {
                    ef.sup_norm = ef.sampled_sup();
                }
                Ok(ef)
            }
            DomainSpec::Disk(bc) => {
                let order = BesselOrder::new(mode.n)?;
                let kappa = match bc {
                    DiskBoundary::Dirichlet => specfun::bessel_zero(order, mode.m)?.value,
                    DiskBoundary::Neumann => specfun::bessel_prime_zero(order, mode.m)?.value,
                };
                let scale = if mode.n == 0 {
                    1.0
                } else {
                    let peak = specfun::bessel_prime_zero(order, 1)?.value;
                    1.0 / specfun::bessel_j(order, peak)?.abs()
                };
                Ok(Eigenfunction {
                    mode,
                    lambda: kappa * kappa,
                    sup_norm: 1.0,
                    kernel: Kernel::Disk { n: mode.n, kappa, scale, sine: mode.parity == Parity::Sine },
                })
            }
        }
    }

    fn sampled_sup(&self) -> f64 {
        let (lo, hi) = self.mode.domain.bounding_box();
        let steps = 400;
        let mut best = 0.0f64;
        for i in 0..=steps {
            for j in 0..=steps {
                let x = lo.x + (hi.x - lo.x) * i as f64 / steps as f64;
                let y = lo.y + (hi.y - lo.y) * j as f64 / steps as f64;
                best = best.max(self.value(Point::new(x, y)).abs());
            }
        }
        best
    }

    /// The mode this eigenfunction realises.
    pub fn mode(&self) -> &ModeSpec {
        &self.mode
    }

    /// The domain.
    pub fn domain(&self) -> &DomainSpec {
        &self.mode.domain
    }

    /// Eigenvalue `lambda` in `-Laplace u = lambda u`.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Frequency `sqrt(lambda)`.
    pub fn frequency(&self) -> f64 {
        self.lambda.sqrt()
    }

    /// `sup |u|` over the domain: exact for product and Bessel modes,
    /// sampled for superpositions.
    pub fn sup_norm(&self) -> f64 {
        self.sup_norm
    }

    /// Radial wavenumber of a disk mode.
    pub fn kappa(&self) -> Option<f64> {
        match self.kernel {
            Kernel::Disk { kappa, .. } => Some(kappa),
            Kernel::Rect(_) => None,
        }
    }

    /// Amplitude applied to `J_n(kappa r)` for disk modes.
    pub fn disk_scale(&self) -> Option<f64> {
        match self.kernel {
            Kernel::Disk { scale, .. } => Some(scale),
            Kernel::Rect(_) => None,
        }
    }

    fn check(&self, p: Point) -> Result<()> {
        if self.mode.domain.contains(p, CLOSURE_TOL) {
            Ok(())
        } else {
            Err(Error::OutsideDomain(p))
        }
    }

    /// `u(p)` for `p` in the closed domain.
    pub fn eval(&self, p: Point) -> Result<f64> {
        self.check(p)?;
        Ok(self.value(p))
    }

    /// `grad u(p)` for `p` in the closed domain.
    pub fn grad(&self, p: Point) -> Result<Vec2> {
        self.check(p)?;
        Ok(self.gradient(p))
    }

    /// Hessian at `p` for `p` in the closed domain.
    pub fn hess(&self, p: Point) -> Result<Sym2> {
        self.check(p)?;
        Ok(self.hessian(p))
    }

    /// Location of `p` relative to the boundary split.
    pub fn boundary_part(&self, p: Point) -> BoundaryPart {
        self.mode.domain.boundary_part(p)
    }
}

fn rect_jet(terms: &[SineTerm], p: Point) -> Jet {
    let mut jet = Jet { value: 0.0, gradient: Vec2::ZERO, hessian: Sym2::new(0.0, 0.0, 0.0) };
    for t in terms {
        let (sx, cx) = (t.kx * p.x).sin_cos();
        let (sy, cy) = (t.ky * p.y).sin_cos();
        let c = t.coef;
        jet.value += c * sx * sy;
        jet.gradient.x += c * t.kx * cx * sy;
        jet.gradient.y += c * t.ky * sx * cy;
        jet.hessian.xx -= c * t.kx * t.kx * sx * sy;
        jet.hessian.xy += c * t.kx * t.ky * cx * cy;
        jet.hessian.yy -= c * t.ky * t.ky * sx * sy;
    }
    jet
}

/// Series form near the origin. With `w = kappa z / 2`, `t = |w|^2` and
/// `E_j = w^j / j!`, the mode is `Q(w) S(t)` where `Q` is the real or
/// imaginary part of `E_n` and `S(t) = sum_k (-t)^k n! / (k! (n+k)!)`.
fn disk_series_jet(n: u32, kappa: f64, sine: bool, p: Point) -> Jet {
    let half = 0.5 * kappa;
    let (wx, wy) = (half * p.x, half * p.y);
    let t = wx * wx + wy * wy;

    // E_{n-2}, E_{n-1}, E_n as (re, im)
    let mut e = [(0.0f64, 0.0f64); 3];
    let mut cur = (1.0f64, 0.0f64);
    let lo = n.saturating_sub(2);
    for j in 0..=n {
        if j > 0 {
            let inv = 1.0 / j as f64;
            cur = ((cur.0 * wx - cur.1 * wy) * inv, (cur.0 * wy + cur.1 * wx) * inv);
        }
        if j >= lo {
            e[(j + 2 - n) as usize] = cur;
        }
    }
    if n < 2 {
        e[0] = (0.0, 0.0);
    }
    if n < 1 {
        e[1] = (0.0, 0.0);
    }
    let pick = |z: (f64, f64)| if sine { z.1 } else { z.0 };
    let q = pick(e[2]);
    let (gq, hq) = if sine {
        (Vec2::new(e[1].1, e[1].0), Sym2::new(e[0].1, e[0].0, -e[0].1))
    } else {
        (Vec2::new(e[1].0, -e[1].1), Sym2::new(e[0].0, -e[0].1, -e[0].0))
    };

    let (mut s0, mut s1, mut s2) = (0.0f64, 0.0f64, 0.0f64);
    let mut c = 1.0f64;
    let mut tk = 1.0f64; // t^k
    let mut tk1 = 0.0f64; // t^(k-1)
    let mut tk2 = 0.0f64; // t^(k-2)
    for k in 0..40u32 {
        if k > 0 {
            c *= -1.0 / (k as f64 * (n + k) as f64);
            tk2 = tk1;
            tk1 = tk;
            tk *= t;
        }
        let kf = k as f64;
        s0 += c * tk;
        s1 += kf * c * tk1;
        s2 += kf * (kf - 1.0) * c * tk2;
        if k > 3 && (c * tk).abs() < 1e-18 {
            break;
        }
    }
    let w = Vec2::new(wx, wy);
    let value = q * s0;
    let grad = gq * s0 + w * (2.0 * q * s1);
    let hess = Sym2::new(
        hq.xx * s0 + 4.0 * s1 * gq.x * wx + q * (2.0 * s1 + 4.0 * s2 * wx * wx),
        hq.xy * s0 + 2.0 * s1 * (gq.x * wy + gq.y * wx) + q * 4.0 * s2 * wx * wy,
        hq.yy * s0 + 4.0 * s1 * gq.y * wy + q * (2.0 * s1 + 4.0 * s2 * wy * wy),
    );
    Jet {
        value,
        gradient: grad * half,
        hessian: Sym2::new(hess.xx * half * half, hess.xy * half * half, hess.yy * half * half),
    }
}

fn disk_polar_jet(n: u32, kappa: f64, sine: bool, p: Point) -> Jet {
    let rho = p.radius();
    let r = kappa * rho;
    let [jm, j, jp] = specfun::jn_triple(n, r);
    let jd = 0.5 * (jm - jp);
    let jdd = specfun::jn_second(n, r, j, jd);
    let nf = n as f64;
    let theta = p.angle();
    let (sn, cn) = (nf * theta).sin_cos();
    let (t, dt) = if sine { (sn, nf * cn) } else { (cn, -nf * sn) };

    let u = j * t;
    let u_r = kappa * jd * t;
    let u_t = j * dt;
    let u_rr = kappa * kappa * jdd * t;
    let u_rt = kappa * jd * dt;
    let u_tt = -nf * nf * u;

    let c = p.x / rho;
    let s = p.y / rho;
    let a = u_rt / rho - u_t / (rho * rho);
    let d = u_r / rho + u_tt / (rho * rho);
    Jet {
        value: u,
        gradient: Vec2::new(c * u_r - s * u_t / rho, s * u_r + c * u_t / rho),
        hessian: Sym2::new(
            c * c * u_rr - 2.0 * c * s * a + s * s * d,
            c * s * (u_rr - d) + (c * c - s * s) * a,
            s * s * u_rr + 2.0 * c * s * a + c * c * d,
        ),
    }
}

impl ScalarField for Eigenfunction {
    fn jet(&self, p: Point) -> Jet {
        match &self.kernel {
            Kernel::Rect(terms) => rect_jet(terms, p),
            &Kernel::Disk { n, kappa, scale, sine } => {
                let raw = if kappa * p.radius() < 2.0 {
                    disk_series_jet(n, kappa, sine, p)
                } else {
                    disk_polar_jet(n, kappa, sine, p)
                };
                Jet {
                    value: scale * raw.value,
                    gradient: raw.gradient * scale,
                    hessian: Sym2::new(
                        scale * raw.hessian.xx,
                        scale * raw.hessian.xy,
                        scale * raw.hessian.yy,
                    ),
                }
            }
        }
    }
}

/// Makes the eigenfunction of `mode`.
pub fn make_eigenfunction(mode: ModeSpec) -> Result<Eigenfunction> {
    Eigenfunction::new(mode)
}

/// Largest supported enumeration length.
pub const MAX_ENUMERATION: usize = 10_000;

/// The first `k` eigenvalues of `domain`, nondecreasing, with multiplicity.
/// Disk modes of order `n >= 1` appear twice (cosine then sine); on a square
/// `(n, m)` and `(m, n)` both appear. The Neumann constant mode is skipped.
pub fn enumerate_modes(domain: DomainSpec, k: usize) -> Result<Vec<(ModeSpec, f64)>> {
    domain.validate()?;
    if k == 0 || k > MAX_ENUMERATION {
        return Err(Error::InvalidArgument("mode count must lie in 1..=10000"));
    }
    match domain {
        DomainSpec::Rectangle { a, b } => enumerate_rectangle(a, b, k),
        DomainSpec::Disk(bc) => enumerate_disk(bc, k),
    }
}

fn enumerate_rectangle(a: f64, b: f64, k: usize) -> Result<Vec<(ModeSpec, f64)>> {
    let area = a * b;
    let mut limit = 4.0 * PI * k as f64 / area * 1.2 + 4.0 * PI * PI * (1.0 / (a * a) + 1.0 / (b * b));
    loop {
        let mut list = Vec::new();
        let nmax = (limit.sqrt() * a / PI).floor() as u32;
        for n in 1..=nmax {
            let rest = limit - PI * PI * (n * n) as f64 / (a * a);
            if rest < 0.0 {
                break;
            }
            let mmax = (rest.sqrt() * b / PI).floor() as u32;
            for m in 1..=mmax {
                let mode = ModeSpec {
                    domain: DomainSpec::Rectangle { a, b },
                    n,
                    m,
                    parity: Parity::Cosine,
                    superposition: None,
                };
                let (nf, mf) = (n as f64, m as f64);
                list.push((mode, PI * PI * (nf * nf / (a * a) + mf * mf / (b * b))));
            }
        }
        if list.len() >= k {
            list.sort_by(|x, y| x.1.total_cmp(&y.1).then(x.0.n.cmp(&y.0.n)).then(x.0.m.cmp(&y.0.m)));
            list.truncate(k);
            return Ok(list);
        }
        limit *= 1.5;
    }
}

fn enumerate_disk(bc: DiskBoundary, k: usize) -> Result<Vec<(ModeSpec, f64)>> {
    let derivative = bc == DiskBoundary::Neumann;
    // every mode of order above MAX_ORDER has wavenumber beyond this
    let ceiling = specfun::first_zero_unchecked(specfun::MAX_ORDER + 1, derivative);
    let mut limit = 2.0 * (k as f64).sqrt() + 3.0 * (k as f64).powf(0.25) + 5.0;
    loop {
        let cap = limit.min(specfun::MAX_ARGUMENT);
        let mut list: Vec<(ModeSpec, f64, f64)> = Vec::new();
        for n in 0..=specfun::MAX_ORDER {
            let zeros = specfun::zeros_below(BesselOrder::new(n)?, cap, derivative)?;
            if zeros.is_empty() {
                break;
            }
            for (i, z) in zeros.iter().enumerate() {
                let m = i as u32 + 1;
                let parities: &[Parity] = if n == 0 { &[Parity::Cosine] } else { &[Parity::Cosine, Parity::Sine] };
                for &parity in parities {
                    let mode = ModeSpec { domain: DomainSpec::Disk(bc), n, m, parity, superposition: None };
                    list.push((mode, *z, z * z));
                }
            }
        }
        if list.len() >= k {
            list.sort_by(|x, y| {
                x.1.total_cmp(&y.1)
                    .then(x.0.n.cmp(&y.0.n))
                    .then(x.0.m.cmp(&y.0.m))
                    .then(x.0.parity.cmp(&y.0.parity))
            });
            list.truncate(k);
            if list[k - 1].1 >= ceiling {
                return Err(Error::InvalidArgument("enumeration exceeds the supported Bessel order"));
            }
            return Ok(list.into_iter().map(|(mode, _, l)| (mode, l)).collect());
        }
        if cap >= specfun::MAX_ARGUMENT {
            return Err(Error::InvalidArgument("enumeration exceeds the supported Bessel range"));
        }
        limit *= 1.3;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rectangle_eigenvalue() {
        let ef = Eigenfunction::new(ModeSpec::rectangle(2.0, 1.0, 3, 2).unwrap()).unwrap();
        assert!((ef.lambda() - 25.0 * PI * PI / 4.0).abs() < 1e-12);
        let ef = Eigenfunction::new(ModeSpec::rectangle(PI, PI, 1, 1).unwrap()).unwrap();
        assert!((ef.lambda() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn invalid_modes_rejected() {
        assert!(ModeSpec::disk(DiskBoundary::Dirichlet, 0, 1, Parity::Sine).is_err());
        assert!(ModeSpec::rectangle(1.0, 1.0, 0, 1).is_err());
        assert!(ModeSpec::rectangle(1.0, 2.0, 1, 2).unwrap().with_superposition(0.3).is_err());
        assert!(ModeSpec::rectangle(1.0, 1.0, 2, 2).unwrap().with_superposition(0.3).is_err());
        assert!(ModeSpec::rectangle(1.0, 1.0, 1, 2).unwrap().with_superposition(0.3).is_ok());
        assert!(DomainSpec::rectangle(-1.0, 1.0).is_err());
    }

    #[test]
    fn boundary_parts() {
        let r = DomainSpec::rectangle(2.0, 1.0).unwrap();
        assert_eq!(r.boundary_part(Point::new(0.0, 0.5)), BoundaryPart::Dirichlet);
        assert_eq!(r.boundary_part(Point::new(1.0, 0.5)), BoundaryPart::Interior);
        assert_eq!(r.boundary_part(Point::new(3.0, 0.5)), BoundaryPart::Exterior);
        let d = DomainSpec::Disk(DiskBoundary::Neumann);
        assert_eq!(d.boundary_part(Point::new(1.0, 0.0)), BoundaryPart::Neumann);
        assert_eq!(d.boundary_part(Point::new(0.2, 0.1)), BoundaryPart::Interior);
    }

    #[test]
    fn boundary_coordinate_round_trip() {
        let r = DomainSpec::rectangle(2.0, 1.0).unwrap();
        for i in 0..60 {
            let s = i as f64 * 0.1;
            let p = r.boundary_point(s);
            assert!((r.boundary_coordinate(p) - s).abs() < 1e-12, "s = {s}");
        }
    }

    #[test]
    fn series_and_polar_forms_agree() {
        for &(n, sine) in &[(0u32, false), (1, false), (1, true), (2, true), (3, false), (7, true)] {
            let kappa = 9.3;
            for &(x, y) in &[(0.2, 0.05), (-0.1, 0.19), (0.0, -0.21)] {
                let p = Point::new(x, y);
                let a = disk_series_jet(n, kappa, sine, p);
                let b = disk_polar_jet(n, kappa, sine, p);
                assert!((a.value - b.value).abs() < 1e-13, "n={n}");
                assert!((a.gradient - b.gradient).norm() < 1e-12, "n={n}");
                let h = Sym2::new(
                    a.hessian.xx - b.hessian.xx,
                    a.hessian.xy - b.hessian.xy,
                    a.hessian.yy - b.hessian.yy,
                );
                assert!(h.max_abs() < 1e-10, "n={n} {:?} {:?}", a.hessian, b.hessian);
            }
        }
    }

    #[test]
    fn disk_enumeration_start() {
        let list = enumerate_modes(DomainSpec::Disk(DiskBoundary::Dirichlet), 8).unwrap();
        let idx: Vec<(u32, u32)> = list.iter().map(|(m, _)| (m.n, m.m)).collect();
        assert_eq!(idx, [(0, 1), (1, 1), (1, 1), (2, 1), (2, 1), (0, 2), (3, 1), (3, 1)]);
    }
}
