use std::fmt;

use nalgebra::{Matrix4, Vector4};

use crate::error::{Error, Result};

pub const MAX_FIT_ITERATIONS: usize = 200;

/// `(z, rho)` points.
pub type Profile = Vec<(f64, f64)>;

/// Which interface of a slab: `Left` has vapor at low z, `Right` has vapor at high z.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    fn sign(self) -> f64 {
        match self {
            Side::Left => 1.0,
            Side::Right => -1.0,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterfaceFit {
    pub side: Side,
    pub rho_l: f64,
    pub rho_g: f64,
    pub z0: f64,
    pub d: f64,
    /// Root-mean-square residual.
    pub residual: f64,
    pub iterations: usize,
}

/// `(rho_l + rho_g)/2 -+ (rho_l - rho_g)/2 tanh(2 (z - z0) / d)`, minus on the right interface.
pub fn tanh_profile(z: f64, rho_l: f64, rho_g: f64, z0: f64, d: f64, side: Side) -> f64 {
    0.5 * (rho_l + rho_g) + side.sign() * 0.5 * (rho_l - rho_g) * (2.0 * (z - z0) / d).tanh()
}

fn residuals(data: &[(f64, f64)], p: &Vector4<f64>, side: Side) -> f64 {
    data.iter().map(|&(z, r)| (tanh_profile(z, p[0], p[1], p[2], p[3], side) - r).powi(2)).sum()
}

fn initial_guess(data: &[(f64, f64)], side: Side) -> Vector4<f64> {
    let m = (data.len() / 10).max(1);
    let mean = |s: &[(f64, f64)]| s.iter().map(|x| x.1).sum::<f64>() / s.len() as f64;
    let (lo_end, hi_end) = (mean(&data[..m]), mean(&data[data.len() - m..]));
    let (rho_l, rho_g) = match side {
        Side::Right => (lo_end, hi_end),
        Side::Left => (hi_end, lo_end),
    };
    let half = 0.5 * (rho_l + rho_g);
    let z0 = data
        .windows(2)
        .find(|w| (w[0].1 - half) * (w[1].1 - half) <= 0.0 && w[0].1 != w[1].1)
        .map(|w| w[0].0 + (half - w[0].1) * (w[1].0 - w[0].0) / (w[1].1 - w[0].1))
        .unwrap_or(0.5 * (data[0].0 + data[data.len() - 1].0));
    Vector4::new(rho_l, rho_g, z0, 1.0)
}

/// Damped Gauss-Newton fit of one interface; `profile` is `(z, rho)` sorted by z.
pub fn fit_interface(profile: &[(f64, f64)], side: Side) -> Result<InterfaceFit> {
    if profile.len() < 8 {
        return Err(Error::FitInput(format!("need at least 8 bins, got {}", profile.len())));
    }
    if profile.iter().any(|(z, r)| !z.is_finite() || !r.is_finite()) {
        return Err(Error::FitInput("non-finite profile value".into()));
    }
    let mut data = profile.to_vec();
    data.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut p = initial_guess(&data, side);
    let s = side.sign();
    let mut cost = residuals(&data, &p, side);
    let mut lambda = 1e-3;
    for it in 1..=MAX_FIT_ITERATIONS {
        let mut jtj = Matrix4::<f64>::zeros();
        let mut jtr = Vector4::<f64>::zeros();
        for &(z, r) in &data {
            let x = 2.0 * (z - p[2]) / p[3];
            let t = x.tanh();
            let sech2 = 1.0 - t * t;
            let amp = s * 0.5 * (p[0] - p[1]);
            let j =
                Vector4::new(0.5 + s * 0.5 * t, 0.5 - s * 0.5 * t, -amp * sech2 * 2.0 / p[3], -amp * sech2 * x / p[3]);
            let res = tanh_profile(z, p[0], p[1], p[2], p[3], side) - r;
            jtj += j * j.transpose();
            jtr += j * res;
        }
        let mut improved = false;
        while lambda < 1e12 {
            let mut a = jtj;
            for k in 0..4 {
                a[(k, k)] += lambda * jtj[(k, k)].max(1e-300);
            }
            let Some(step) = a.lu().solve(&(-jtr)) else {
                lambda *= 10.0;
                continue;
            };
            let trial = p + step;
            let trial_cost = if trial[3] > 0.0 { residuals(&data, &trial, side) } else { f64::INFINITY };
            if trial_cost <= cost {
                let small = step.iter().zip(p.iter()).all(|(d, v)| d.abs() <= 1e-13 * v.abs().max(1e-3));
                p = trial;
                let flat = cost - trial_cost <= 1e-30 + 1e-15 * cost;
                cost = trial_cost;
                lambda = (lambda * 0.1).max(1e-12);
                improved = true;
                if small || flat {
                    return finish(p, cost, data.len(), side, it);
                }
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            return finish(p, cost, data.len(), side, it);
        }
    }
    Err(Error::FitDiverged { iterations: MAX_FIT_ITERATIONS, residual: (cost / data.len() as f64).sqrt() })
}

fn finish(p: Vector4<f64>, cost: f64, n: usize, side: Side, iterations: usize) -> Result<InterfaceFit> {
    let residual = (cost / n as f64).sqrt();
    if !(p[3] > 0.0 && p[0] > p[1]) {
        return Err(Error::FitDiverged { iterations, residual });
    }
    Ok(InterfaceFit { side, rho_l: p[0], rho_g: p[1], z0: p[2], d: p[3], residual, iterations })
}

/// Splits a slab profile at its density-weighted center.
pub fn split_at_center_of_mass(profile: &[(f64, f64)]) -> (Profile, Profile) {
    let mass: f64 = profile.iter().map(|x| x.1).sum();
    let zc = if mass > 0.0 { profile.iter().map(|x| x.0 * x.1).sum::<f64>() / mass } else { 0.0 };
    profile.iter().partition(|x| x.0 < zc)
}
