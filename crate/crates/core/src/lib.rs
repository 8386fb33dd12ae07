//! Molecular dynamics with Lennard-Jones pairs and Axilrod-Teller-Muto triplets
//! on periodic linked cells.
//!
//! Three cell-triplet traversals are available ([`TraversalKind`]): a
//! one-color full-neighborhood scan without Newton's third law (`3c01`), a
//! forward-neighbor scan (`3c18`) and a 2x2x2 block scan (`3c08`), each under
//! a pairwise or a product cutoff ([`CutoffMode`]).

pub mod cells;
pub mod dynamics;
pub mod error;
pub mod harness;
pub mod observables;
pub mod oracle;
pub mod params;
pub mod pbc;
pub mod phase;
pub mod potentials;
pub mod traversal;
pub mod vec3;

pub use cells::CellGrid;
pub use error::{Error, Result};
pub use params::{CutoffMode, Params, TraversalKind};
pub use pbc::{minimum_image, wrap_position, SimBox};
pub use phase::PhaseSpace;
pub use traversal::{hitrate, Energies, Evaluation, ExecOptions, ForceEngine, TripletCounters};
pub use vec3::Vec3;
