//! JSON form of a partition.

use serde::{Deserialize, Serialize};

use neumann_core::asymptotics::Counts;
use neumann_core::eigen::{Eigenfunction, ModeSpec};
use neumann_core::partition::{CountReport, DomainClass, DomainSign, NeumannAnalysis, VerificationReport};

use crate::spec::{self, DomainArg};

/// Mode identification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeDoc {
    /// Domain in `rect:A,B` / `disk` / `disk:neumann` syntax.
    pub domain: String,
    /// First index.
    pub n: u32,
    /// Second index.
    pub m: u32,
    /// `cos` or `sin`.
    pub parity: String,
    /// Blend angle on a square.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub superposition: Option<f64>,
}

impl ModeDoc {
    /// Describes `mode`.
    pub fn new(mode: &ModeSpec) -> Self {
        ModeDoc {
            domain: DomainArg(mode.domain).to_string(),
            n: mode.n,
            m: mode.m,
            parity: spec::parity_name(mode.parity).to_owned(),
            superposition: mode.superposition,
        }
    }

    /// Rebuilds the mode.
    pub fn to_mode(&self) -> anyhow::Result<ModeSpec> {
        let domain: DomainArg = self.domain.parse().map_err(anyhow::Error::msg)?;
        let parity = spec::parse_parity(&self.parity).map_err(anyhow::Error::msg)?;
        Ok(spec::mode(domain.0, self.n, self.m, parity, self.superposition)?)
    }
}

/// Domain counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountsDoc {
    pub total: u64,
    pub inner: u64,
    pub boundary: u64,
}

impl From<Counts> for CountsDoc {
    fn from(c: Counts) -> Self {
        CountsDoc { total: c.total, inner: c.inner, boundary: c.boundary }
    }
}

impl From<CountsDoc> for Counts {
    fn from(c: CountsDoc) -> Self {
        Counts { total: c.total, inner: c.inner, boundary: c.boundary }
    }
}

/// One domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainDoc {
    pub id: usize,
    /// `inner` or `boundary`.
    pub class: String,
    pub area: f64,
    /// `positive`, `negative`, `mixed` or `zero`.
    pub sign: String,
}

/// The line set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinesDoc {
    pub length_total: f64,
    /// Separatrix polylines as `[x, y]` pairs.
    pub polylines: Vec<Vec<[f64; 2]>>,
}

/// One verification clause.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClauseDoc {
    pub clause: String,
    pub description: String,
    pub passed: bool,
    pub margin: f64,
    pub witness: Option<[f64; 2]>,
}

/// A full partition document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionDoc {
    pub mode: ModeDoc,
    pub lambda: f64,
    pub counts: CountsDoc,
    pub domains: Vec<DomainDoc>,
    pub lines: LinesDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<Vec<ClauseDoc>>,
}

fn class_name(c: DomainClass) -> &'static str {
    match c {
        DomainClass::Inner => "inner",
        DomainClass::Boundary => "boundary",
    }
}

fn sign_name(s: DomainSign) -> &'static str {
    match s {
        DomainSign::Positive => "positive",
        DomainSign::Negative => "negative",
        DomainSign::Mixed => "mixed",
        DomainSign::Zero => "zero",
    }
}

impl PartitionDoc {
    /// Collects the document for an analysed mode.
    pub fn new(ef: &Eigenfunction, analysis: &NeumannAnalysis, verification: Option<&VerificationReport>) -> Self {
        let p = &analysis.partition;
        PartitionDoc {
            mode: ModeDoc::new(ef.mode()),
            lambda: ef.lambda(),
            counts: p.counts().into(),
            domains: p
                .domains
                .iter()
                .map(|d| DomainDoc {
                    id: d.id,
                    class: class_name(d.class).to_owned(),
                    area: d.area,
                    sign: sign_name(d.sign.sign()).to_owned(),
                })
                .collect(),
            lines: LinesDoc {
                length_total: analysis.lines.total_length(),
                polylines: analysis.lines.polylines().map(|l| l.iter().map(|q| [q.x, q.y]).collect()).collect(),
            },
            verification: verification.map(|r| {
                r.clauses
                    .iter()
                    .map(|c| ClauseDoc {
                        clause: c.clause.tag().to_string(),
                        description: c.clause.description().to_owned(),
                        passed: c.passed,
                        margin: c.margin,
                        witness: c.witness.map(|w| [w.x, w.y]),
                    })
                    .collect()
            }),
        }
    }

    /// The count report this document describes.
    pub fn count_report(&self) -> anyhow::Result<CountReport> {
        let mode = self.mode.to_mode()?;
        let formula = if mode.superposition.is_none() {
            neumann_core::asymptotics::closed_form_count(mode.domain, mode.n, mode.m).ok()
        } else {
            None
        };
        Ok(CountReport { mode, lambda: self.lambda, labeled: self.counts.into(), formula })
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }
}
