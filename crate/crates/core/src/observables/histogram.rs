use crate::error::{Error, Result};
use crate::phase::PhaseSpace;

/// Bins per histogram.
pub const HIST_BINS: usize = 600;

/// Fixed-width accumulator over `[lo, hi)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    pub counts: Vec<f64>,
    pub lo: f64,
    pub hi: f64,
    pub samples: u64,
}

impl Histogram {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(Error::config(format!("histogram range [{lo}, {hi}) is empty")));
        }
        Ok(Histogram { counts: vec![0.0; HIST_BINS], lo, hi, samples: 0 })
    }

    #[inline]
    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / HIST_BINS as f64
    }

    pub fn center(&self, b: usize) -> f64 {
        self.lo + (b as f64 + 0.5) * self.width()
    }

    #[inline]
    pub fn bin_of(&self, x: f64) -> Option<usize> {
        if !(x >= self.lo && x < self.hi) {
            return None;
        }
        Some((((x - self.lo) / self.width()) as usize).min(HIST_BINS - 1))
    }

    #[inline]
    pub fn add(&mut self, x: f64, w: f64) {
        if let Some(b) = self.bin_of(x) {
            self.counts[b] += w;
        }
    }
}

/// Radial distribution function up to half the shortest box edge.
#[derive(Clone, Debug)]
pub struct RadialDistribution {
    pub hist: Histogram,
}

impl RadialDistribution {
    pub fn new(phase: &PhaseSpace) -> Result<Self> {
        let l = phase.sim_box().lengths();
        Ok(RadialDistribution { hist: Histogram::new(0.0, 0.5 * l.x.min(l.y).min(l.z))? })
    }

    /// Adds every pair, counted once per partner.
    pub fn accumulate(&mut self, phase: &PhaseSpace) {
        let bx = phase.sim_box();
        let p = &phase.positions;
        let h = &mut self.hist;
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                let r = bx.minimum_image(p[i] - p[j]).norm();
                if r > 0.0 {
                    h.add(r, 2.0);
                }
            }
        }
        h.samples += 1;
    }

    /// `(r, g(r))` at bin centers.
    pub fn finalize(&self, rho: f64, n: usize) -> Vec<(f64, f64)> {
        let h = &self.hist;
        let w = h.width();
        (0..HIST_BINS)
            .map(|b| {
                let (r_in, r_out) = (h.lo + b as f64 * w, h.lo + (b + 1) as f64 * w);
                let shell = 4.0 / 3.0 * std::f64::consts::PI * (r_out.powi(3) - r_in.powi(3));
                let norm = n as f64 * shell * rho * h.samples as f64;
                (h.center(b), if norm > 0.0 { h.counts[b] / norm } else { 0.0 })
            })
            .collect()
    }
}

/// Number density along z.
#[derive(Clone, Debug)]
pub struct DensityProfile {
    pub hist: Histogram,
    area: f64,
}

impl DensityProfile {
    pub fn new(phase: &PhaseSpace) -> Result<Self> {
        let l = phase.sim_box().lengths();
        Ok(DensityProfile { hist: Histogram::new(0.0, l.z)?, area: l.x * l.y })
    }

    pub fn accumulate(&mut self, phase: &PhaseSpace) {
        for p in &phase.positions {
            self.hist.add(p.z, 1.0);
        }
        self.hist.samples += 1;
    }

    pub fn bin_volume(&self) -> f64 {
        self.area * self.hist.width()
    }

    /// `(z, rho(z))` at bin centers.
    pub fn finalize(&self) -> Vec<(f64, f64)> {
        let v = self.bin_volume() * self.hist.samples.max(1) as f64;
        (0..HIST_BINS).map(|b| (self.hist.center(b), self.hist.counts[b] / v)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::init_random;
    use crate::pbc::SimBox;
    use crate::vec3::Vec3;

    #[test]
    fn two_particles_single_bin() {
        let b = SimBox::cubic(10.0).unwrap();
        let ps = PhaseSpace::from_positions(b, vec![Vec3::splat(1.0), Vec3::new(2.7, 1.0, 1.0)]).unwrap();
        let mut rdf = RadialDistribution::new(&ps).unwrap();
        rdf.accumulate(&ps);
        let nonzero: Vec<usize> = (0..HIST_BINS).filter(|&k| rdf.hist.counts[k] > 0.0).collect();
        assert_eq!(nonzero.len(), 1);
        let k = nonzero[0];
        let w = rdf.hist.width();
        assert!(k as f64 * w <= 1.7 && 1.7 < (k + 1) as f64 * w);
    }

    #[test]
    fn ideal_gas_is_flat() {
        let b = SimBox::cubic(10.0).unwrap();
        let mut rdf = None;
        for seed in 0..20 {
            let ps = PhaseSpace::from_positions(b, init_random(1000, &b, 0.0, seed).unwrap()).unwrap();
            let r = rdf.get_or_insert_with(|| RadialDistribution::new(&ps).unwrap());
            r.accumulate(&ps);
        }
        let g = rdf.unwrap().finalize(1.0, 1000);
        // Coarse-grain over 60 bins to beat the noise.
        for chunk in g[60..].chunks(60) {
            let mean = chunk.iter().map(|x| x.1).sum::<f64>() / chunk.len() as f64;
            assert!((mean - 1.0).abs() < 0.05, "{mean}");
        }
    }

    #[test]
    fn profile_counts_particles() {
        let b = SimBox::new(5.0, 5.0, 30.0).unwrap();
        let pts = vec![Vec3::new(1.0, 1.0, 10.2), Vec3::new(2.0, 3.0, 10.3), Vec3::new(4.0, 4.0, 10.4)];
        let ps = PhaseSpace::from_positions(b, pts).unwrap();
        let mut prof = DensityProfile::new(&ps).unwrap();
        prof.accumulate(&ps);
        let rho = prof.finalize();
        let total: f64 = rho.iter().map(|(_, r)| r * prof.bin_volume()).sum();
        assert!((total - 3.0).abs() < 1e-12);
        assert!(rho.iter().filter(|(z, _)| *z < 10.0 || *z > 10.5).all(|(_, r)| *r == 0.0));
    }
}
