//! Closed-form Neumann-domain and nodal counts, the `theta(s)` solver, the
//! counting constants and ratio series along the spectrum.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float as _;

use crate::eigen::{enumerate_modes, DiskBoundary, DomainSpec, ModeSpec};
use crate::specfun::{self, BesselOrder};
use crate::{Error, Result};

pub use crate::specfun::mccann_bound;

/// Neumann-domain counts of a partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Counts {
    /// All domains.
    pub total: u64,
    /// Domains whose flow lines never reach the Dirichlet boundary.
    pub inner: u64,
    /// Domains whose flow lines reach the Dirichlet boundary.
    pub boundary: u64,
}

impl Counts {
    /// Counts from the inner and boundary parts.
    pub fn new(inner: u64, boundary: u64) -> Self {
        Counts { total: inner + boundary, inner, boundary }
    }
}

/// Exact Neumann-domain counts for rectangle modes and Dirichlet disk modes.
pub fn closed_form_count(domain: DomainSpec, n: u32, m: u32) -> Result<Counts> {
    domain.validate()?;
    if m == 0 {
        return Err(Error::InvalidMode("m must be at least 1"));
    }
    let (n, m) = (n as u64, m as u64);
    match domain {
        DomainSpec::Rectangle { .. } => {
            if n == 0 {
                return Err(Error::InvalidMode("rectangle modes need n >= 1"));
            }
            Ok(Counts::new(n * (m - 1) + (n - 1) * m, 2 * n + 2 * m))
        }
        DomainSpec::Disk(DiskBoundary::Dirichlet) => Ok(match n {
            0 => Counts::new(m - 1, 1),
            1 => Counts::new(4 * (m - 1) + 1, 2),
            2 => Counts::new(4 * (2 * m - 1), 4),
            _ => Counts::new(2 * n * (2 * m - 1), 2 * n),
        }),
        DomainSpec::Disk(DiskBoundary::Neumann) => Err(Error::NoClosedForm),
    }
}

/// Number of nodal domains.
pub fn nodal_count(domain: DomainSpec, n: u32, m: u32) -> Result<u64> {
    domain.validate()?;
    if m == 0 {
        return Err(Error::InvalidMode("m must be at least 1"));
    }
    let (n, m) = (n as u64, m as u64);
    Ok(match domain {
        DomainSpec::Rectangle { .. } => n * m,
        DomainSpec::Disk(DiskBoundary::Dirichlet) => {
            if n == 0 {
                m
            } else {
                2 * n * m
            }
        }
        // J_n has m - 1 zeros below j'_{n,m} for n >= 1 and m below j'_{0,m}
        DomainSpec::Disk(DiskBoundary::Neumann) => {
            if n == 0 {
                m + 1
            } else {
                2 * n * m
            }
        }
    })
}

/// Whether the mode is Morse (all critical points non-degenerate).
pub fn is_morse(domain: DomainSpec, n: u32) -> bool {
    match domain {
        DomainSpec::Rectangle { .. } => true,
        DomainSpec::Disk(_) => n == 1 || n == 2,
    }
}

/// The root of `tan(theta) - theta = pi s` in `(0, pi/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaSolution {
    /// Parameter.
    pub s: f64,
    /// Root.
    pub theta: f64,
}

fn tan_minus_id(t: f64) -> f64 {
    if t < 0.05 {
        let t2 = t * t;
        t * t2 * (1.0 / 3.0 + t2 * (2.0 / 15.0 + t2 * (17.0 / 315.0 + t2 * 62.0 / 2835.0)))
    } else {
        t.tan() - t
    }
}

/// Solves `tan(theta) - theta = pi s` for `s > 0`.
pub fn theta_of_s(s: f64) -> Result<ThetaSolution> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::InvalidArgument("s must be positive and finite"));
    }
    let target = PI * s;
    let (mut lo, mut hi) = (0.0f64, PI / 2.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if tan_minus_id(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut theta = 0.5 * (lo + hi);
    for _ in 0..8 {
        let tan = theta.tan();
        let step = (tan_minus_id(theta) - target) / (tan * tan);
        let next = theta - step;
        if !(next > 0.0 && next < PI / 2.0) || step == 0.0 {
            break;
        }
        theta = next;
    }
    Ok(ThetaSolution { s, theta })
}

/// Residual `tan(theta) - theta - pi s`.
pub fn theta_residual(sol: &ThetaSolution) -> f64 {
    tan_minus_id(sol.theta) - PI * sol.s
}

/// Domain family of a counting constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstantDomain {
    /// Rectangles with irrational squared aspect ratio.
    Rectangle,
    /// The Dirichlet unit disk.
    Disk,
}

/// How a constant was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstantMethod {
    /// Closed form.
    Analytic,
    /// Numerical maximisation.
    Optimized,
}

/// A counting constant together with its published decimal value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantReport {
    /// Family.
    pub domain: ConstantDomain,
    /// Computed value.
    pub value: f64,
    /// How `value` was obtained.
    pub method: ConstantMethod,
    /// Published value.
    pub reference_value: f64,
    /// Tolerance against `reference_value`.
    pub tolerance: f64,
    /// Maximiser `s` for the optimised constant.
    pub maximizer: Option<f64>,
}

impl ConstantReport {
    /// Whether `value` lies within `tolerance` of `reference_value`.
    pub fn within_tolerance(&self) -> bool {
        (self.value - self.reference_value).abs() <= self.tolerance
    }
}

/// Lower end of the search interval for the disk maximiser.
pub const DISK_BRACKET_LO: f64 = 1e-4;
/// Upper end of the search interval for the disk maximiser.
pub const DISK_BRACKET_HI: f64 = 50.0;

/// `16 s cos^2(theta(s))`.
pub fn disk_objective(s: f64) -> Result<f64> {
    let c = theta_of_s(s)?.theta.cos();
    Ok(16.0 * s * c * c)
}

fn golden_section_max(lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = disk_objective(c)?;
    let mut fd = disk_objective(d)?;
    let (fa, fb) = (disk_objective(a)?, disk_objective(b)?);
    if !(fc.max(fd) > fa && fc.max(fd) > fb) {
        return Err(Error::Bracket);
    }
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = disk_objective(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = disk_objective(d)?;
        }
    }
    let s = 0.5 * (a + b);
    Ok((s, disk_objective(s)?))
}

/// The Neumann-domain counting constant of a family.
pub fn neumann_constant(domain: ConstantDomain) -> Result<ConstantReport> {
    match domain {
        ConstantDomain::Rectangle => Ok(ConstantReport {
            domain,
            value: 4.0 / PI,
            method: ConstantMethod::Analytic,
            reference_value: 4.0 / PI,
            tolerance: 1e-12,
            maximizer: None,
        }),
        ConstantDomain::Disk => {
            let (s, value) = golden_section_max(DISK_BRACKET_LO, DISK_BRACKET_HI, 1e-10)?;
            Ok(ConstantReport {
                domain,
                value,
                method: ConstantMethod::Optimized,
                reference_value: 0.9226,
                tolerance: 5e-4,
                maximizer: Some(s),
            })
        }
    }
}

/// The nodal (Pleijel-type) constant of the disk, half the Neumann constant.
pub fn disk_pleijel_constant() -> Result<f64> {
    Ok(0.5 * neumann_constant(ConstantDomain::Disk)?.value)
}

/// One row of the Elbert–Laforgia comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElbertLaforgiaRow {
    /// Order.
    pub n: u32,
    /// Rank `n s`.
    pub rank: u32,
    /// `j_{n, n s} / n`.
    pub ratio: f64,
    /// `1 / cos(theta(s))`.
    pub limit: f64,
    /// `|ratio - limit|`.
    pub error: f64,
}

/// Compares `j_{n, ns} / n` with its limit `1 / cos(theta(s))`.
pub fn elbert_laforgia_check(orders: &[u32], s: f64) -> Result<Vec<ElbertLaforgiaRow>> {
    let limit = 1.0 / theta_of_s(s)?.theta.cos();
    let mut rows = Vec::with_capacity(orders.len());
    for &n in orders {
        let rank_f = n as f64 * s;
        let rank = rank_f.round();
        if n == 0 || (rank - rank_f).abs() > 1e-9 || rank < 1.0 {
            return Err(Error::InvalidArgument("n s must be a positive integer"));
        }
        let rank = rank as u32;
        let z = specfun::bessel_zero(BesselOrder::new(n)?, rank)?.value;
        let ratio = z / n as f64;
        rows.push(ElbertLaforgiaRow { n, rank, ratio, limit, error: (ratio - limit).abs() });
    }
    Ok(rows)
}

/// Largest supported ratio-series length.
pub const MAX_RATIO_SERIES: usize = 5000;

/// One entry of the ratio series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioEntry {
    /// Rank in the spectrum, starting at 1.
    pub k: usize,
    /// Mode realising the `k`-th eigenvalue.
    pub mode: ModeSpec,
    /// Eigenvalue.
    pub lambda: f64,
    /// Closed-form Neumann-domain count.
    pub mu: u64,
    /// `mu / k`.
    pub ratio: f64,
    /// Running maximum of `ratio` up to `k`.
    pub running_max: f64,
}

/// `mu(u_k) / k` along the first `k_max` eigenvalues.
pub fn ratio_series(domain: DomainSpec, k_max: usize) -> Result<Vec<RatioEntry>> {
    if k_max == 0 || k_max > MAX_RATIO_SERIES {
        return Err(Error::InvalidArgument("series length must lie in 1..=5000"));
    }
    let modes = enumerate_modes(domain, k_max)?;
    let mut out = Vec::with_capacity(k_max);
    let mut running = 0.0f64;
    for (i, (mode, lambda)) in modes.into_iter().enumerate() {
        let k = i + 1;
        let mu = closed_form_count(domain, mode.n, mode.m)?.total;
        let ratio = mu as f64 / k as f64;
        running = running.max(ratio);
        out.push(RatioEntry { k, mode, lambda, mu, ratio, running_max: running });
    }
    Ok(out)
}

/// Largest `mu / k` over entries with `k >= from`.
pub fn tail_max(series: &[RatioEntry], from: usize) -> f64 {
    series.iter().filter(|e| e.k >= from).map(|e| e.ratio).fold(0.0, f64::max)
}

/// Largest `mu / N(lambda)` over entries with `k >= from`, where
/// `N(lambda) = |domain| lambda / (4 pi)` is the Weyl count.
pub fn weyl_tail_max(domain: DomainSpec, series: &[RatioEntry], from: usize) -> f64 {
    series
        .iter()
        .filter(|e| e.k >= from)
        .map(|e| e.mu as f64 / (domain.area() * e.lambda / (4.0 * PI)))
        .fold(0.0, f64::max)
}
