//! Sticky-disc particle configurations: bond graphs, faces, energy identities,
//! lattice orientations, hexagonal Finsler perimeters and desk-scale
//! discrete-to-continuum experiments.

pub mod cli;
pub mod energy;
pub mod error;
pub mod finsler;
pub mod geom;
pub mod graph;
pub mod harness;
pub mod orient;
pub mod synth;

pub use error::{Error, Result};
pub use geom::{LatticeFrame, Point2, Polygon};
pub use graph::{Analysis, Configuration};

/// Crate version, recorded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
