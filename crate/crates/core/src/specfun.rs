//! Bessel functions of the first kind of integer order and their zeros.
//!
//! `J_n(x)` is evaluated by the ascending series for small arguments and by
//! Miller's backward recurrence, normalised with `J_0 + 2 sum J_2k = 1`,
//! everywhere else. Zeros of `J_n` and `J_n'` are isolated by a unit-step
//! sign-change scan and then polished by safeguarded Newton steps, so the
//! rank of every returned zero is established by the scan itself.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float as _;

use crate::{Error, Result};

/// Largest supported order.
pub const MAX_ORDER: u32 = 200;
/// Largest supported argument.
pub const MAX_ARGUMENT: f64 = 1000.0;
/// Largest supported zero rank.
pub const MAX_RANK: u32 = 200;

const SERIES_CUTOFF: f64 = 2.0;
const RESCALE: f64 = 1e250;
const SCAN_STEP: f64 = 1.0;

/// Order `n` of a Bessel function, `0 <= n <= 200`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BesselOrder(u32);

impl BesselOrder {
    /// Validates an order.
    pub fn new(n: u32) -> Result<Self> {
        if n > MAX_ORDER {
            return Err(Error::OrderOutOfRange(n));
        }
        Ok(BesselOrder(n))
    }

    /// The raw order.
    pub fn get(self) -> u32 {
        self.0
    }
}

/// The `m`-th positive zero of `J_n` (or of `J_n'`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselZero {
    /// Order.
    pub n: u32,
    /// One-based rank.
    pub m: u32,
    /// Location of the zero.
    pub value: f64,
}

/// Lower bound `sqrt(n^2 + pi^2 (m - 1/4)^2)` for `j_{n,m}` (McCann).
pub fn mccann_bound(n: u32, m: u32) -> f64 {
    let n = n as f64;
    let s = PI * (m as f64 - 0.25);
    (n * n + s * s).sqrt()
}

fn check_argument(x: f64) -> Result<()> {
    if !(0.0..=MAX_ARGUMENT).contains(&x) {
        return Err(Error::ArgumentOutOfRange(x));
    }
    Ok(())
}

/// `J_n(x)` for `0 <= x <= 1000`.
pub fn bessel_j(n: BesselOrder, x: f64) -> Result<f64> {
    check_argument(x)?;
    Ok(jn_triple(n.0, x)[1])
}

/// `J_n'(x)`, through `J_n' = (J_{n-1} - J_{n+1}) / 2` and `J_0' = -J_1`.
pub fn bessel_j_prime(n: BesselOrder, x: f64) -> Result<f64> {
    check_argument(x)?;
    let [jm, _, jp] = jn_triple(n.0, x);
    Ok(0.5 * (jm - jp))
}

/// `J_n''(x)` from Bessel's equation; finite at `x = 0`.
pub(crate) fn jn_second(n: u32, x: f64, j: f64, jd: f64) -> f64 {
    if x == 0.0 {
        // J_n''(0): -1/2 for n = 0, 1/2 for n = 2, zero otherwise
        return match n {
            0 => -0.5,
            2 => 0.5,
            _ => 0.0,
        };
    }
    let nf = n as f64;
    -jd / x - (1.0 - nf * nf / (x * x)) * j
}

/// `[J_{n-1}(x), J_n(x), J_{n+1}(x)]` with `J_{-1} = -J_1`. No range checks.
pub(crate) fn jn_triple(n: u32, x: f64) -> [f64; 3] {
    if x < SERIES_CUTOFF {
        let j = ascending_series(n, x);
        let jp = ascending_series(n + 1, x);
        let jm = if n == 0 { -jp } else { ascending_series(n - 1, x) };
        [jm, j, jp]
    } else {
        miller(n, x)
    }
}

/// Ascending power series of `J_n`; accurate for moderate `x`.
pub(crate) fn ascending_series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut lead = 1.0;
    for k in 1..=n {
        lead *= half / k as f64;
        if lead == 0.0 {
            return 0.0;
        }
    }
    let q = -half * half;
    let mut term = lead;
    let mut sum = lead;
    for k in 1..80u32 {
        term *= q / (k as f64 * (k + n) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

fn miller(n: u32, x: f64) -> [f64; 3] {
    let reach = (n as f64).max(x);
    let mut top = (reach + 30.0 + 10.0 * reach.cbrt()) as u32;
    top += top % 2;
    let scale = 2.0 / x;

    let mut out = [0.0f64; 3];
    let mut upper = 0.0f64; // J_{k+1}
    let mut cur = 1.0f64; // J_k
    let mut sum = 0.0f64;
    let mut k = top;
    loop {
        if k + 1 == n {
            out[0] = cur;
        } else if k == n {
            out[1] = cur;
        } else if k == n + 1 {
            out[2] = cur;
        }
        if k == 0 {
            sum += cur;
            break;
        }
        if k.is_multiple_of(2) {
            sum += 2.0 * cur;
        }
        let lower = k as f64 * scale * cur - upper;
        upper = cur;
        cur = lower;
        if cur.abs() > RESCALE {
            let s = 1.0 / RESCALE;
            cur *= s;
            upper *= s;
            sum *= s;
            for v in &mut out {
                *v *= s;
            }
        }
        k -= 1;
    }
    for v in &mut out {
        *v /= sum;
    }
    if n == 0 {
        out[0] = -out[2];
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ZeroKind {
    Value,
    Derivative,
}

/// Walks the positive zeros of `J_n` or `J_n'` in increasing order.
struct ZeroScan {
    n: u32,
    kind: ZeroKind,
    x: f64,
    fx: f64,
}

impl ZeroScan {
    fn new(n: u32, kind: ZeroKind) -> Self {
        let start = match kind {
            // no zero of J_n below the McCann bound for the first zero
            ZeroKind::Value => mccann_bound(n, 1) * (1.0 - 1e-9),
            // J_n' keeps one sign on (0, n] for n >= 1, and on (0, 0.5] for n = 0
            ZeroKind::Derivative => {
                if n == 0 {
                    0.5
                } else {
                    n as f64
                }
            }
        };
        let mut scan = ZeroScan { n, kind, x: start, fx: 0.0 };
        scan.fx = scan.f(start);
        scan
    }

    fn f(&self, x: f64) -> f64 {
        let [jm, j, jp] = jn_triple(self.n, x);
        match self.kind {
            ZeroKind::Value => j,
            ZeroKind::Derivative => 0.5 * (jm - jp),
        }
    }

    fn f_and_slope(&self, x: f64) -> (f64, f64) {
        let [jm, j, jp] = jn_triple(self.n, x);
        let jd = 0.5 * (jm - jp);
        match self.kind {
            ZeroKind::Value => (j, jd),
            ZeroKind::Derivative => (jd, jn_second(self.n, x, j, jd)),
        }
    }

    fn polish(&self, mut lo: f64, mut hi: f64, flo: f64) -> f64 {
        let lo_sign = flo.signum();
        while hi - lo > 1e-6 * hi.max(1.0) {
            let mid = 0.5 * (lo + hi);
            let fm = self.f(mid);
            if fm == 0.0 {
                return mid;
            }
            if fm.signum() == lo_sign {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut x = 0.5 * (lo + hi);
        for _ in 0..30 {
            let (fx, dfx) = self.f_and_slope(x);
            if fx == 0.0 {
                return x;
            }
            if fx.signum() == lo_sign {
                lo = x;
            } else {
                hi = x;
            }
            let mut next = x - fx / dfx;
            if !(next > lo && next < hi) || !next.is_finite() {
                next = 0.5 * (lo + hi);
            }
            let step = (next - x).abs();
            x = next;
            if step <= 4.0 * f64::EPSILON * x || hi - lo <= 4.0 * f64::EPSILON * x {
                break;
            }
        }
        x
    }

    /// Next zero, or `None` once the scan passes the supported argument range.
    fn next_zero(&mut self) -> Option<f64> {
        loop {
            let b = self.x + SCAN_STEP;
            if b > MAX_ARGUMENT {
                return None;
            }
            let fb = self.f(b);
            let (a, fa) = (self.x, self.fx);
            if fb == 0.0 {
                let nudged = b * (1.0 + 1e-12);
                self.x = nudged;
                self.fx = self.f(nudged);
                return Some(b);
            }
            self.x = b;
            self.fx = fb;
            if fa != 0.0 && fa.signum() != fb.signum() {
                return Some(self.polish(a, b, fa));
            }
        }
    }
}

fn collect_zeros(n: BesselOrder, count: u32, kind: ZeroKind) -> Result<Vec<BesselZero>> {
    if count == 0 || count > MAX_RANK {
        return Err(Error::RankOutOfRange(count));
    }
    let mut scan = ZeroScan::new(n.0, kind);
    let mut out = Vec::with_capacity(count as usize);
    for m in 1..=count {
        let value = scan.next_zero().ok_or(Error::ZeroBracket { n: n.0, m })?;
        if kind == ZeroKind::Value && value <= mccann_bound(n.0, m) {
            return Err(Error::ZeroBracket { n: n.0, m });
        }
        out.push(BesselZero { n: n.0, m, value });
    }
    Ok(out)
}

/// First positive zero of `J_n` (or `J_n'`) without the order range check.
pub(crate) fn first_zero_unchecked(n: u32, derivative: bool) -> f64 {
    let kind = if derivative { ZeroKind::Derivative } else { ZeroKind::Value };
    ZeroScan::new(n, kind).next_zero().unwrap_or(f64::INFINITY)
}

/// The first `count` positive zeros of `J_n`.
pub fn bessel_zeros(n: BesselOrder, count: u32) -> Result<Vec<BesselZero>> {
    collect_zeros(n, count, ZeroKind::Value)
}

/// The first `count` positive zeros of `J_n'`.
pub fn bessel_prime_zeros(n: BesselOrder, count: u32) -> Result<Vec<BesselZero>> {
    collect_zeros(n, count, ZeroKind::Derivative)
}

/// `j_{n,m}`, the `m`-th positive zero of `J_n`.
pub fn bessel_zero(n: BesselOrder, m: u32) -> Result<BesselZero> {
    if m == 0 || m > MAX_RANK {
        return Err(Error::RankOutOfRange(m));
    }
    Ok(*bessel_zeros(n, m)?.last().expect("m >= 1"))
}

/// `j'_{n,m}`, the `m`-th positive zero of `J_n'` (for `n = 0` the zero at
/// the origin is not counted).
pub fn bessel_prime_zero(n: BesselOrder, m: u32) -> Result<BesselZero> {
    if m == 0 || m > MAX_RANK {
        return Err(Error::RankOutOfRange(m));
    }
    Ok(*bessel_prime_zeros(n, m)?.last().expect("m >= 1"))
}

/// All positive zeros of `J_n` (or of `J_n'` when `derivative` is set) that
/// are `<= limit`.
pub fn zeros_below(n: BesselOrder, limit: f64, derivative: bool) -> Result<Vec<f64>> {
    check_argument(limit)?;
    let kind = if derivative { ZeroKind::Derivative } else { ZeroKind::Value };
    let mut scan = ZeroScan::new(n.0, kind);
    let mut out = Vec::new();
    if scan.x > limit {
        return Ok(out);
    }
    while let Some(z) = scan.next_zero() {
        if z > limit {
            break;
        }
        out.push(z);
    }
    Ok(out)
}
