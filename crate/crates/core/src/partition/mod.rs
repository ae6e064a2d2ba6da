//! Neumann line sets and Neumann-domain partitions.
//!
//! The pipeline is: critical inventory, separatrices of every saddle-type
//! point, the line set (separatrices, critical circles, the Neumann boundary
//! and all isolated critical points), and a grid labelling of the
//! complement. Each connected component of the unmasked grid is checked
//! against the limit signatures of a few random flow lines; a component whose
//! samples disagree is relabelled cell by cell.

mod grid;
mod lines;
mod separatrix;
mod verify;

#[allow(unused_imports)]
use num_traits::Float as _;

pub use grid::{
    label_domains_with, Domain, DomainClass, DomainSign, Grid, NeumannPartition, SignProfile, SignatureClass,
    SignatureMap, Terminus, NO_LABEL,
};
pub use lines::{neumann_line_set, BoundaryArc, NeumannLineSet};
pub use separatrix::{ray_seeds, separatrices_with, Branch, Separatrix, SeparatrixConfig};
pub use verify::{verify_partition, verify_partition_with, Clause, ClauseCheck, VerificationReport};

use alloc::vec::Vec;
use core::f64::consts::TAU;

use crate::asymptotics::{closed_form_count, Counts};
use crate::critical::{find_critical_points, CriticalSet, SearchConfig};
use crate::eigen::{Eigenfunction, ModeSpec};
use crate::exec::{Executor, Serial};
use crate::flow::FlowConfig;
use crate::{Error, Result};

/// Largest supported grid resolution (cells per unit length).
pub const MAX_RESOLUTION: usize = 8192;

/// Settings for the whole partition pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionConfig {
    /// Grid cells per unit length.
    pub resolution: usize,
    /// Half-width of the masked band around the line set, in cells.
    pub line_margin: f64,
    /// Flow signatures sampled per component.
    pub samples_per_domain: usize,
    /// Seed for the sample choice.
    pub seed: u64,
    /// Components with fewer cells are treated as part of the band.
    pub min_component_cells: usize,
    /// Subcells per side for cells near lines or the boundary in the
    /// domain integrals.
    pub quadrature_subdivisions: usize,
    /// Largest tolerated fraction of signatures that hit the step budget.
    pub budget_tol: f64,
    /// Bound on `|int u| / int |u|` over inner domains.
    pub int_tol: f64,
    /// Bound on `|grad u . normal| / |grad u|` along separatrices.
    pub align_tol: f64,
    /// Bound on the relative change of the line length when the flow step
    /// is halved.
    pub length_tol: f64,
    /// Critical point search.
    pub search: SearchConfig,
    /// Separatrix tracing.
    pub separatrix: SeparatrixConfig,
    /// Flow integration for signatures.
    pub flow: FlowConfig,
}

impl Default for PartitionConfig {
    fn default() -> Self {
        PartitionConfig {
            resolution: 512,
            line_margin: 1.5,
            samples_per_domain: 8,
            seed: 0,
            min_component_cells: 16,
            quadrature_subdivisions: 8,
            budget_tol: 1e-3,
            int_tol: 1e-3,
            align_tol: 1e-6,
            length_tol: 1e-3,
            search: SearchConfig::default(),
            separatrix: SeparatrixConfig::default(),
            flow: FlowConfig::default(),
        }
    }
}

impl PartitionConfig {
    /// Smallest resolution accepted for `ef`: 96 cells per wavelength.
    pub fn min_resolution(ef: &Eigenfunction) -> usize {
        (96.0 * ef.frequency() / TAU).ceil() as usize
    }

    /// Checks ranges that do not depend on the mode.
    pub fn validate(&self) -> Result<()> {
        let pos = |v: f64| v > 0.0 && v.is_finite();
        if self.resolution == 0 || self.resolution > MAX_RESOLUTION {
            return Err(Error::InvalidConfig("resolution out of range"));
        }
        if !(pos(self.line_margin)
            && pos(self.budget_tol)
            && pos(self.int_tol)
            && pos(self.align_tol)
            && pos(self.length_tol)
            && pos(self.separatrix.offset))
            || self.samples_per_domain == 0
        {
            return Err(Error::InvalidConfig("partition tolerances must be positive"));
        }
        self.search.validate()?;
        self.flow.validate()?;
        self.separatrix.flow.validate()
    }

    /// Checks ranges including the resolution floor for `ef`.
    pub fn validate_for(&self, ef: &Eigenfunction) -> Result<()> {
        self.validate()?;
        if self.resolution < Self::min_resolution(ef) {
            return Err(Error::InvalidConfig("resolution below 96 cells per wavelength"));
        }
        Ok(())
    }
}

/// Everything computed for one eigenfunction.
#[derive(Debug, Clone, PartialEq)]
pub struct NeumannAnalysis {
    /// Critical inventory.
    pub critical: CriticalSet,
    /// Line set including the separatrices.
    pub lines: NeumannLineSet,
    /// Grid labelling.
    pub partition: NeumannPartition,
}

/// Separatrices traced serially.
pub fn separatrices(ef: &Eigenfunction, crit: &CriticalSet, cfg: &SeparatrixConfig) -> Result<Vec<Separatrix>> {
    separatrices_with(ef, crit, cfg, &Serial)
}

/// Domain labelling on the calling thread.
pub fn label_domains(
    ef: &Eigenfunction,
    crit: &CriticalSet,
    lines: &NeumannLineSet,
    cfg: &PartitionConfig,
) -> Result<NeumannPartition> {
    label_domains_with(ef, crit, lines, cfg, &Serial)
}

/// Runs the full pipeline.
pub fn analyze_with<E: Executor>(ef: &Eigenfunction, cfg: &PartitionConfig, exec: &E) -> Result<NeumannAnalysis> {
    cfg.validate_for(ef)?;
    let critical = find_critical_points(ef, &cfg.search)?;
    let seps = separatrices_with(ef, &critical, &cfg.separatrix, exec)?;
    let lines = neumann_line_set(*ef.domain(), &critical, seps);
    let partition = label_domains_with(ef, &critical, &lines, cfg, exec)?;
    Ok(NeumannAnalysis { critical, lines, partition })
}

/// Full pipeline on the calling thread.
pub fn analyze(ef: &Eigenfunction, cfg: &PartitionConfig) -> Result<NeumannAnalysis> {
    analyze_with(ef, cfg, &Serial)
}

/// Labelled counts next to the closed form, when one exists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountReport {
    /// The mode.
    pub mode: ModeSpec,
    /// Its eigenvalue.
    pub lambda: f64,
    /// Counts from the labelling.
    pub labeled: Counts,
    /// Counts from the closed form.
    pub formula: Option<Counts>,
}

impl CountReport {
    /// Builds a report from a finished labelling.
    pub fn new(ef: &Eigenfunction, partition: &NeumannPartition) -> Self {
        let mode = *ef.mode();
        let formula = if mode.superposition.is_none() {
            closed_form_count(mode.domain, mode.n, mode.m).ok()
        } else {
            None
        };
        CountReport { mode, lambda: ef.lambda(), labeled: partition.counts(), formula }
    }

    /// Whether labelled and closed-form counts agree, if the latter exists.
    pub fn matches(&self) -> Option<bool> {
        self.formula.map(|f| f == self.labeled)
    }
}

/// Counts the Neumann domains of `ef`.
pub fn count_domains_with<E: Executor>(ef: &Eigenfunction, cfg: &PartitionConfig, exec: &E) -> Result<CountReport> {
    let a = analyze_with(ef, cfg, exec)?;
    Ok(CountReport::new(ef, &a.partition))
}

/// Counts the Neumann domains of `ef` on the calling thread.
pub fn count_domains(ef: &Eigenfunction, cfg: &PartitionConfig) -> Result<CountReport> {
    count_domains_with(ef, cfg, &Serial)
}
