use crate::geom::Point;

/// Errors raised by the numerical pipeline.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Bessel order outside the supported range.
    #[error("Bessel order {0} is outside the supported range 0..=200")]
    OrderOutOfRange(u32),
    /// Bessel argument outside the supported range.
    #[error("Bessel argument {0} is outside the supported range [0, 1000]")]
    ArgumentOutOfRange(f64),
    /// Zero rank outside `1..=200`.
    #[error("zero rank {0} is outside the supported range 1..=200")]
    RankOutOfRange(u32),
    /// The sign-change scan could not isolate the requested zero.
    #[error("could not bracket zero #{m} of order {n}")]
    ZeroBracket {
        /// Bessel order.
        n: u32,
        /// Requested rank.
        m: u32,
    },
    /// A mode specification violates its invariants.
    #[error("invalid mode: {0}")]
    InvalidMode(&'static str),
    /// A domain specification violates its invariants.
    #[error("invalid domain: {0}")]
    InvalidDomain(&'static str),
    /// A point was given outside the closed domain.
    #[error("point ({}, {}) lies outside the closed domain", .0.x, .0.y)]
    OutsideDomain(Point),
    /// A configuration value is out of range.
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    /// Argument out of the operation's domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
    /// No closed-form count exists for this family.
    #[error("no closed form for this family")]
    NoClosedForm,
    /// A critical curve carries the value zero, which analytic eigenfunctions forbid.
    #[error("critical curve at radius {radius} has zero value")]
    ZeroValuedCurve {
        /// Radius of the offending circle.
        radius: f64,
    },
    /// A critical point classified as something impossible on the zero level.
    #[error("critical point ({}, {}) on the zero level is neither a saddle nor fully degenerate", .0.x, .0.y)]
    SingularNotSaddle(Point),
    /// The flow integrator left the closed domain or produced non-finite values.
    #[error("flow integration failed near ({}, {})", .0.x, .0.y)]
    FlowFailure(Point),
    /// Too many grid signatures hit the step budget.
    #[error("{unresolved} of {total} sampled signatures exhausted the step budget")]
    UnresolvedSignatures {
        /// Number of samples that ended in `Budget`.
        unresolved: usize,
        /// Number of samples taken.
        total: usize,
    },
    /// A separatrix ray never left the neighbourhood of its saddle.
    #[error("separatrix ray from ({}, {}) did not leave the capture radius", .0.x, .0.y)]
    StuckSeparatrix(Point),
    /// The golden-section bracket for the disk constant is not unimodal.
    #[error("optimizer bracket failure")]
    Bracket,
}

/// Crate-wide result alias.
pub type Result<T, E = Error> = core::result::Result<T, E>;
