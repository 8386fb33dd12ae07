//! Thermodynamic averages, tail corrections, histograms and interface fitting.

mod fit;
mod histogram;
mod lrc;
mod thermo;

pub use fit::{fit_interface, split_at_center_of_mass, tanh_profile, InterfaceFit, Profile, Side, MAX_FIT_ITERATIONS};
pub use histogram::{DensityProfile, Histogram, RadialDistribution, HIST_BINS};
pub use lrc::lrc_homogeneous;
pub use thermo::{pressure, ThermoAccumulator, ThermoAverages, ThermoSample};
