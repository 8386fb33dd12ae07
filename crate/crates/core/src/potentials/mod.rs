//! Pair (Lennard-Jones) and triple-dipole (Axilrod-Teller-Muto) interactions.

mod atm;
mod cutoff;
mod lj;

pub use atm::{
    atm_energy, atm_gradient, force_triple, force_triple_from_separations, ForceTriple, TripletGeometry, TripletTerms,
};
pub use cutoff::cutoff_accept;
pub use lj::lj_energy_force;

pub(crate) use atm::atm_kernel;
pub(crate) use lj::lj_kernel;

use crate::error::{Error, Result};

/// Separations below this are treated as coincident particles.
pub const MIN_DISTANCE: f64 = 1e-12;
pub(crate) const MIN_DISTANCE_SQ: f64 = MIN_DISTANCE * MIN_DISTANCE;

#[inline]
pub(crate) fn check_distance(r: f64) -> Result<()> {
    if r.is_nan() || r < MIN_DISTANCE {
        Err(Error::Coincident { distance: r, min: MIN_DISTANCE })
    } else {
        Ok(())
    }
}
