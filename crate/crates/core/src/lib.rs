//! Neumann-domain partitions of explicit Laplacian eigenfunctions.
//!
//! The crate computes the gradient-flow partition of Dirichlet and Neumann
//! eigenfunctions on rectangles and on the unit disk: critical points and
//! their classification, separatrices of the descent flow `z' = -grad u`,
//! the Neumann line set, and a grid labelling of the Neumann domains. It
//! also carries the closed-form domain counts and the asymptotic counting
//! constants for both families.
//!
//! Everything here is `no_std` (with `alloc`); file formats, the CLI and
//! rendering live in the `neumann` companion crate.

#![no_std]
#![warn(missing_docs)]

extern crate alloc;

pub mod asymptotics;
pub mod critical;
pub mod eigen;
mod error;
pub mod exec;
pub mod flow;
pub mod geom;
pub mod partition;
pub mod specfun;

pub use error::{Error, Result};
pub use geom::{Point, Sym2, Vec2};
