//! Initialization, velocity-Verlet integration and velocity-rescaling thermostat.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::pbc::SimBox;
use crate::phase::PhaseSpace;
use crate::traversal::{Evaluation, ForceEngine};
use crate::vec3::Vec3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThermostatMode {
    None,
    Rescale,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thermostat {
    pub t_target: f64,
    pub mode: ThermostatMode,
}

impl Thermostat {
    pub fn off() -> Self {
        Thermostat { t_target: 0.0, mode: ThermostatMode::None }
    }

    pub fn rescale(t_target: f64) -> Result<Self> {
        if !(t_target.is_finite() && t_target > 0.0) {
            return Err(Error::config(format!("thermostat temperature must be positive, got {t_target}")));
        }
        Ok(Thermostat { t_target, mode: ThermostatMode::Rescale })
    }
}

/// Lattice sites per axis for `n` sites in `bx`, close to cubic cells.
fn lattice_dims(n: usize, bx: &SimBox) -> [usize; 3] {
    let l = bx.lengths();
    let spacing = (bx.volume() / n as f64).cbrt();
    let mut m = [0, 1, 2].map(|a| ((l[a] / spacing) - 1e-9).ceil().max(1.0) as usize);
    while m[0] * m[1] * m[2] < n {
        let widest = (0..3).max_by(|&a, &b| (l[a] / m[a] as f64).total_cmp(&(l[b] / m[b] as f64))).unwrap_or(0);
        m[widest] += 1;
    }
    m
}

/// First `n` sites of a simple cubic lattice, offset by half a spacing, x fastest.
pub fn init_lattice(n: usize, bx: &SimBox) -> Vec<Vec3> {
    if n == 0 {
        return Vec::new();
    }
    let m = lattice_dims(n, bx);
    let l = bx.lengths();
    let h = Vec3::new(l.x / m[0] as f64, l.y / m[1] as f64, l.z / m[2] as f64);
    (0..n)
        .map(|s| {
            let c = [s % m[0], (s / m[0]) % m[1], s / (m[0] * m[1])];
            Vec3::new((c[0] as f64 + 0.5) * h.x, (c[1] as f64 + 0.5) * h.y, (c[2] as f64 + 0.5) * h.z)
        })
        .collect()
}

/// Uniform random positions with a minimum pairwise image separation.
pub fn init_random(n: usize, bx: &SimBox, min_distance: f64, seed: u64) -> Result<Vec<Vec3>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let l = bx.lengths();
    let min2 = min_distance * min_distance;
    let mut out: Vec<Vec3> = Vec::with_capacity(n);
    let budget = 1000 * n.max(1);
    let mut tries = 0;
    while out.len() < n {
        tries += 1;
        if tries > budget {
            return Err(Error::config(format!(
                "could not place {n} particles {min_distance} apart in the box (placed {})",
                out.len()
            )));
        }
        let p = Vec3::new(rng.random::<f64>() * l.x, rng.random::<f64>() * l.y, rng.random::<f64>() * l.z);
        let p = bx.wrap(p);
        if out.iter().all(|q| bx.minimum_image(p - *q).norm2() >= min2) {
            out.push(p);
        }
    }
    Ok(out)
}

pub fn remove_net_momentum(velocities: &mut [Vec3]) {
    if velocities.is_empty() {
        return;
    }
    let mean = velocities.iter().copied().sum::<Vec3>() / velocities.len() as f64;
    for v in velocities {
        *v -= mean;
    }
}

/// Maxwell-Boltzmann velocities with zero net momentum and exactly the target temperature.
pub fn init_velocities(n: usize, t_target: f64, mass: f64, seed: u64) -> Result<Vec<Vec3>> {
    if n < 2 {
        return Err(Error::config(format!("velocity initialization needs at least 2 particles, got {n}")));
    }
    if !(t_target.is_finite() && t_target >= 0.0) || !(mass.is_finite() && mass > 0.0) {
        return Err(Error::config(format!("invalid temperature {t_target} or mass {mass}")));
    }
    if t_target == 0.0 {
        return Ok(vec![Vec3::ZERO; n]);
    }
    let normal = Normal::new(0.0, (t_target / mass).sqrt()).map_err(|e| Error::config(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<Vec3> =
        (0..n).map(|_| Vec3::new(normal.sample(&mut rng), normal.sample(&mut rng), normal.sample(&mut rng))).collect();
    remove_net_momentum(&mut v);
    let t_inst = mass * v.iter().map(|x| x.norm2()).sum::<f64>() / (3.0 * n as f64);
    let s = (t_target / t_inst).sqrt();
    for x in &mut v {
        *x = *x * s;
    }
    Ok(v)
}

/// Scales velocities so the instantaneous temperature equals `t_target`.
pub fn rescale_thermostat(phase: &mut PhaseSpace, t_target: f64, mass: f64) -> Result<()> {
    let t = phase.temperature(mass);
    if !(t > 0.0) {
        return Err(Error::ZeroKinetic);
    }
    let s = (t_target / t).sqrt();
    for v in &mut phase.velocities {
        *v = *v * s;
    }
    Ok(())
}

/// One velocity-Verlet step; forces on entry must belong to the current positions.
pub fn step(phase: &mut PhaseSpace, engine: &mut ForceEngine, thermostat: &Thermostat) -> Result<Evaluation> {
    let p = *engine.params();
    let half = 0.5 * p.dt / p.mass;
    for (v, f) in phase.velocities.iter_mut().zip(&phase.forces) {
        *v += *f * half;
    }
    let bx = *phase.sim_box();
    for (x, v) in phase.positions.iter_mut().zip(&phase.velocities) {
        *x = bx.wrap(*x + *v * p.dt);
    }
    let eval = engine.compute(phase)?;
    for (v, f) in phase.velocities.iter_mut().zip(&phase.forces) {
        *v += *f * half;
    }
    if thermostat.mode == ThermostatMode::Rescale {
        rescale_thermostat(phase, thermostat.t_target, p.mass)?;
    }
    Ok(eval)
}
