//! Command-line driver and file formats for `neumann-core`.
//!
//! The binary `neumann` exposes the subcommands `modes`, `specfun`,
//! `critical`, `flow`, `partition`, `count-table`, `constants` and
//! `render`. Parallel work runs on a rayon pool sized by `NEUMANN_THREADS`.

pub mod cli;
pub mod exec;
pub mod report;
pub mod spec;
pub mod svg;
