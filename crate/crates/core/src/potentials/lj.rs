use crate::error::Result;
use crate::params::Params;

use super::check_distance;

/// Lennard-Jones energy and `f_over_r`, where the force on i from j is `f_over_r * r_ij`.
pub fn lj_energy_force(r2: f64, params: &Params) -> Result<(f64, f64)> {
    check_distance(r2.sqrt())?;
    Ok(lj_kernel(r2, 4.0 * params.epsilon, params.sigma * params.sigma))
}

/// Unchecked form with `eps4 = 4 epsilon` and `sig2 = sigma^2`.
#[inline(always)]
pub(crate) fn lj_kernel(r2: f64, eps4: f64, sig2: f64) -> (f64, f64) {
    let s2 = sig2 / r2;
    let s6 = s2 * s2 * s2;
    let s12 = s6 * s6;
    (eps4 * (s12 - s6), 6.0 * eps4 * (2.0 * s12 - s6) / r2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn p() -> Params {
        Params::default()
    }

    #[test]
    fn sigma_crossing() {
        let (u, _) = lj_energy_force(1.0, &p()).unwrap();
        assert_eq!(u, 0.0);
    }

    #[test]
    fn minimum() {
        let r2 = 2f64.powf(1.0 / 3.0);
        let (u, f) = lj_energy_force(r2, &p()).unwrap();
        assert!((u + 1.0).abs() < 1e-14);
        assert!(f.abs() < 1e-13);
    }

    #[test]
    fn at_two_sigma() {
        let (u, _) = lj_energy_force(4.0, &p()).unwrap();
        assert_eq!(u, -0.0615234375);
    }

    #[test]
    fn coincident_is_domain_error() {
        assert!(matches!(lj_energy_force(0.0, &p()), Err(Error::Coincident { .. })));
    }

    #[test]
    fn force_is_negative_gradient() {
        let pr = p();
        for &r in &[0.95, 1.1, 1.5, 2.2, 2.5] {
            let h = 1e-6;
            let u = |r: f64| lj_energy_force(r * r, &pr).unwrap().0;
            let du = (u(r + h) - u(r - h)) / (2.0 * h);
            let (_, f) = lj_energy_force(r * r, &pr).unwrap();
            assert!((f * r + du).abs() <= 1e-6 * du.abs().max(1e-3), "r = {r}");
        }
    }

    #[test]
    fn general_epsilon_sigma() {
        let pr = Params { epsilon: 2.0, sigma: 1.5, ..Params::default() };
        let r = 1.5 * 2f64.powf(1.0 / 6.0);
        let (u, f) = lj_energy_force(r * r, &pr).unwrap();
        assert!((u + 2.0).abs() < 1e-13);
        assert!(f.abs() < 1e-12);
    }
}
