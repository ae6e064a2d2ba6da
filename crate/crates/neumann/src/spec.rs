//! Textual domain and mode specifications such as `rect:2,1` or `disk:neumann`.

use std::fmt;
use std::str::FromStr;

use neumann_core::eigen::{DiskBoundary, DomainSpec, ModeSpec, Parity};

/// Golden ratio, accepted as `phi` in rectangle sides.
pub const PHI: f64 = 1.618_033_988_749_895;

/// A parsed domain, printable back into the same syntax.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainArg(pub DomainSpec);

fn side(s: &str) -> Result<f64, String> {
    match s.trim() {
        "phi" => Ok(PHI),
        t => t.parse::<f64>().map_err(|e| format!("bad rectangle side `{t}`: {e}")),
    }
}

impl FromStr for DomainArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let spec = match (kind, rest) {
            ("rect" | "rectangle", r) => {
                let (a, b) = r.split_once(',').ok_or_else(|| format!("expected rect:A,B, got `{s}`"))?;
                DomainSpec::rectangle(side(a)?, side(b)?).map_err(|e| e.to_string())?
            }
            ("square", "") => DomainSpec::rectangle(1.0, 1.0).map_err(|e| e.to_string())?,
            ("disk", "" | "dirichlet") => DomainSpec::Disk(DiskBoundary::Dirichlet),
            ("disk", "neumann") => DomainSpec::Disk(DiskBoundary::Neumann),
            _ => return Err(format!("unknown domain `{s}` (use rect:A,B, square, disk or disk:neumann)")),
        };
        Ok(DomainArg(spec))
    }
}

impl fmt::Display for DomainArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            DomainSpec::Rectangle { a, b } => write!(f, "rect:{a},{b}"),
            DomainSpec::Disk(DiskBoundary::Dirichlet) => f.write_str("disk"),
            DomainSpec::Disk(DiskBoundary::Neumann) => f.write_str("disk:neumann"),
        }
    }
}

/// Parses `cos` or `sin`.
pub fn parse_parity(s: &str) -> Result<Parity, String> {
    match s {
        "cos" | "cosine" => Ok(Parity::Cosine),
        "sin" | "sine" => Ok(Parity::Sine),
        _ => Err(format!("unknown parity `{s}` (use cos or sin)")),
    }
}

/// Short name of a parity.
pub fn parity_name(p: Parity) -> &'static str {
    match p {
        Parity::Cosine => "cos",
        Parity::Sine => "sin",
    }
}

/// Builds a validated mode.
pub fn mode(
    domain: DomainSpec,
    n: u32,
    m: u32,
    parity: Parity,
    superposition: Option<f64>,
) -> neumann_core::Result<ModeSpec> {
    let base = match domain {
        DomainSpec::Rectangle { a, b } => ModeSpec::rectangle(a, b, n, m)?,
        DomainSpec::Disk(bc) => ModeSpec::disk(bc, n, m, parity)?,
    };
    match superposition {
        Some(alpha) => base.with_superposition(alpha),
        None => Ok(base),
    }
}
