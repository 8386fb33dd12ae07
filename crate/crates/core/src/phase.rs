//! Particle state and the plain-text snapshot format.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::pbc::SimBox;
use crate::vec3::Vec3;

/// Positions, velocities and forces of N equal-mass particles in a periodic box.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseSpace {
    pub positions: Vec<Vec3>,
    pub velocities: Vec<Vec3>,
    pub forces: Vec<Vec3>,
    sim_box: SimBox,
}

impl PhaseSpace {
    pub fn new(sim_box: SimBox) -> Self {
        PhaseSpace { positions: Vec::new(), velocities: Vec::new(), forces: Vec::new(), sim_box }
    }

    /// Builds a state at rest; positions are wrapped into the box.
    pub fn from_positions(sim_box: SimBox, positions: Vec<Vec3>) -> Result<Self> {
        if let Some(p) = positions.iter().find(|p| !p.is_finite()) {
            return Err(Error::config(format!("non-finite position {p:?}")));
        }
        let n = positions.len();
        let positions = positions.into_iter().map(|p| sim_box.wrap(p)).collect();
        Ok(PhaseSpace { positions, velocities: vec![Vec3::ZERO; n], forces: vec![Vec3::ZERO; n], sim_box })
    }

    pub fn with_velocities(mut self, velocities: Vec<Vec3>) -> Result<Self> {
        if velocities.len() != self.positions.len() {
            return Err(Error::config(format!(
                "{} velocities for {} particles",
                velocities.len(),
                self.positions.len()
            )));
        }
        self.velocities = velocities;
        Ok(self)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    #[inline]
    pub fn sim_box(&self) -> &SimBox {
        &self.sim_box
    }

    /// Replaces the box; positions are re-wrapped.
    pub fn set_box(&mut self, sim_box: SimBox) {
        self.sim_box = sim_box;
        self.wrap_all();
    }

    pub fn density(&self) -> f64 {
        self.len() as f64 / self.sim_box.volume()
    }

    pub fn wrap_all(&mut self) {
        let b = self.sim_box;
        for p in &mut self.positions {
            *p = b.wrap(*p);
        }
    }

    pub fn zero_forces(&mut self) {
        self.forces.iter_mut().for_each(|f| *f = Vec3::ZERO);
    }

    pub fn kinetic_energy(&self, mass: f64) -> f64 {
        0.5 * mass * self.velocities.iter().map(|v| v.norm2()).sum::<f64>()
    }

    /// Instantaneous temperature `2 E_kin / (3 N)`.
    pub fn temperature(&self, mass: f64) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        2.0 * self.kinetic_energy(mass) / (3.0 * self.len() as f64)
    }

    pub fn total_momentum(&self, mass: f64) -> Vec3 {
        self.velocities.iter().copied().sum::<Vec3>() * mass
    }

    pub fn net_force(&self) -> Vec3 {
        self.forces.iter().copied().sum()
    }

    /// Writes `N Lx Ly Lz` then one `x y z vx vy vz` line per particle, 17 significant digits.
    pub fn write_snapshot<W: Write>(&self, mut w: W) -> Result<()> {
        let l = self.sim_box.lengths();
        writeln!(w, "{} {:.16e} {:.16e} {:.16e}", self.len(), l.x, l.y, l.z)?;
        for (p, v) in self.positions.iter().zip(&self.velocities) {
            writeln!(w, "{:.16e} {:.16e} {:.16e} {:.16e} {:.16e} {:.16e}", p.x, p.y, p.z, v.x, v.y, v.z)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_snapshot<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines().enumerate().filter_map(|(i, l)| match l {
            Ok(s) if s.trim().is_empty() => None,
            other => Some((i + 1, other)),
        });
        let (line, header) = lines.next().ok_or(Error::Parse { line: 1, message: "empty snapshot".into() })?;
        let header = header?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::Parse { line, message: format!("expected 'N Lx Ly Lz', got '{header}'") });
        }
        let n: usize = fields[0].parse().map_err(|e| Error::Parse { line, message: format!("bad N: {e}") })?;
        let l = parse_reals::<3>(&fields[1..], line)?;
        let sim_box = SimBox::new(l[0], l[1], l[2])?;
        let mut positions = Vec::with_capacity(n);
        let mut velocities = Vec::with_capacity(n);
        for _ in 0..n {
            let (line, text) =
                lines.next().ok_or(Error::Parse { line: line + 1, message: format!("expected {n} particle lines") })?;
            let text = text?;
            let fields: Vec<&str> = text.split_whitespace().collect();
            if fields.len() != 6 {
                return Err(Error::Parse { line, message: format!("expected 6 columns, got {}", fields.len()) });
            }
            let v = parse_reals::<6>(&fields, line)?;
            positions.push(Vec3::new(v[0], v[1], v[2]));
            velocities.push(Vec3::new(v[3], v[4], v[5]));
        }
        if let Some((line, _)) = lines.next() {
            return Err(Error::Parse { line, message: format!("trailing data after {n} particles") });
        }
        PhaseSpace::from_positions(sim_box, positions)?.with_velocities(velocities)
    }
}

fn parse_reals<const K: usize>(fields: &[&str], line: usize) -> Result<[f64; K]> {
    let mut out = [0.0; K];
    for (o, f) in out.iter_mut().zip(fields) {
        *o = f.parse().map_err(|e| Error::Parse { line, message: format!("bad number '{f}': {e}") })?;
    }
    Ok(out)
}
