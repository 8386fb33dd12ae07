use std::f64::consts::PI;

use crate::params::Params;

/// Lennard-Jones tail corrections `(E_tail / N, P_tail)` for a homogeneous fluid.
pub fn lrc_homogeneous(rho: f64, r_c: f64, params: &Params) -> (f64, f64) {
    let (eps, sig) = (params.epsilon, params.sigma);
    let s3 = (sig / r_c).powi(3);
    let s9 = s3 * s3 * s3;
    let sig3 = sig * sig * sig;
    let energy = 8.0 / 3.0 * PI * rho * eps * sig3 * (s9 / 3.0 - s3);
    let pressure = 16.0 / 3.0 * PI * rho * rho * eps * sig3 * (2.0 / 3.0 * s9 - s3);
    (energy, pressure)
}
