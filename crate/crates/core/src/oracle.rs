//! Brute-force reference forces, energies and virials.
//!
//! Independent of the cell and traversal code: cell membership, when needed,
//! is recomputed here from positions, and only minimum-image arithmetic and
//! the potential kernels are shared.

use crate::error::{Error, Result};
use crate::params::{Params, TraversalKind};
use crate::phase::PhaseSpace;
use crate::potentials::{force_triple_from_separations, lj_energy_force};
use crate::vec3::Vec3;

/// Largest system the oracle accepts.
pub const ORACLE_LIMIT: usize = 2000;

/// Which triplets the oracle considers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OracleScope {
    /// Every triplet at minimum-image separations.
    Unlimited,
    /// Only triplets whose cells are pairwise adjacent on a grid of `dims` cells.
    Adjacent { dims: [usize; 3] },
    /// Exactly the visits a traversal makes on a grid of `dims` cells.
    Traversal { kind: TraversalKind, dims: [usize; 3] },
}

#[derive(Clone, Debug, Default)]
pub struct OracleResult {
    pub forces: Vec<Vec3>,
    pub e2: f64,
    pub e3: f64,
    pub w2: f64,
    pub w3: f64,
    /// Distinct particle triplets with at least one accepted visit.
    pub accepted_triplets: u64,
    /// Accepted visits, counting repeated visits separately.
    pub accepted_visits: u64,
    pub accepted_pairs: u64,
    /// Sorted ids of the distinct accepted triplets, ascending.
    pub accepted_set: Vec<[usize; 3]>,
}

/// Reference evaluation; `neighborhood_limited` restricts triplets to pairwise adjacent cells
/// of side at least `r_c`.
pub fn brute_force(phase: &PhaseSpace, params: &Params, neighborhood_limited: bool) -> Result<OracleResult> {
    let scope = if neighborhood_limited {
        let l = phase.sim_box().lengths();
        let dims = [0, 1, 2].map(|a| (l[a] / params.r_c).floor() as usize);
        if dims.iter().any(|&d| d < 3) {
            return Err(Error::config("neighborhood-limited oracle needs at least 3 cells per axis"));
        }
        OracleScope::Adjacent { dims }
    } else {
        OracleScope::Unlimited
    };
    brute_force_scoped(phase, params, scope)
}

struct View {
    pos: [Vec3; 3],
    /// Member receiving force, or all three when `None`.
    target: Option<usize>,
    weight: f64,
}

struct Frame {
    dims: [usize; 3],
    lengths: Vec3,
}

impl Frame {
    fn cell(&self, p: Vec3) -> [usize; 3] {
        [0, 1, 2].map(|a| {
            let c = (p[a] / (self.lengths[a] / self.dims[a] as f64)).floor();
            if c <= 0.0 {
                0
            } else {
                (c as usize).min(self.dims[a] - 1)
            }
        })
    }

    /// Periodic offset in {-1, 0, 1} per axis from `from` to `to`, if adjacent.
    fn offset(&self, from: [usize; 3], to: [usize; 3]) -> Option<[i64; 3]> {
        let mut o = [0i64; 3];
        for a in 0..3 {
            let n = self.dims[a] as i64;
            let d = (to[a] as i64 - from[a] as i64).rem_euclid(n);
            o[a] = if d == 0 {
                0
            } else if d == 1 {
                1
            } else if d == n - 1 {
                -1
            } else {
                return None;
            };
        }
        Some(o)
    }

    /// Image shift of the cell at `anchor + offset`.
    fn shift(&self, anchor: [usize; 3], offset: [i64; 3]) -> Vec3 {
        let mut s = [0.0; 3];
        for a in 0..3 {
            let n = self.dims[a] as i64;
            let c = anchor[a] as i64 + offset[a];
            s[a] = c.div_euclid(n) as f64 * self.lengths[a];
        }
        Vec3::from_array(s)
    }
}

fn is_forward(o: [i64; 3]) -> bool {
    let key = o[0] + 3 * o[1] + 9 * o[2];
    key > 0
}

fn views(
    scope: OracleScope,
    frame: Option<&Frame>,
    p: [Vec3; 3],
    cells: [[usize; 3]; 3],
    phase: &PhaseSpace,
) -> Vec<View> {
    let bx = phase.sim_box();
    let min_image = || {
        let pi = p[0];
        [pi, pi - bx.minimum_image(p[0] - p[1]), pi - bx.minimum_image(p[0] - p[2])]
    };
    match scope {
        OracleScope::Unlimited => vec![View { pos: min_image(), target: None, weight: 1.0 }],
        OracleScope::Adjacent { .. } => {
            let f = frame.expect("frame");
            let adjacent = f.offset(cells[0], cells[1]).is_some()
                && f.offset(cells[0], cells[2]).is_some()
                && f.offset(cells[1], cells[2]).is_some();
            if adjacent {
                vec![View { pos: min_image(), target: None, weight: 1.0 }]
            } else {
                Vec::new()
            }
        }
        OracleScope::Traversal { kind, .. } => {
            let f = frame.expect("frame");
            match kind {
                TraversalKind::C01 => (0..3)
                    .filter_map(|m| {
                        let mut pos = [Vec3::ZERO; 3];
                        for o in 0..3 {
                            let d = f.offset(cells[m], cells[o])?;
                            pos[o] = p[o] + f.shift(cells[m], d);
                        }
                        Some(View { pos, target: Some(m), weight: 1.0 / 3.0 })
                    })
                    .collect(),
                TraversalKind::C18 => {
                    let mut out = Vec::new();
                    let mut bases: Vec<[usize; 3]> = cells.to_vec();
                    bases.sort_unstable();
                    bases.dedup();
                    for base in bases {
                        let mut pos = [Vec3::ZERO; 3];
                        let mut ok = true;
                        for o in 0..3 {
                            match f.offset(base, cells[o]) {
                                Some(d) if d == [0, 0, 0] || is_forward(d) => pos[o] = p[o] + f.shift(base, d),
                                _ => {
                                    ok = false;
                                    break;
                                }
                            }
                        }
                        if ok {
                            out.push(View { pos, target: None, weight: 1.0 });
                        }
                    }
                    out
                }
                TraversalKind::C08 => {
                    let mut anchor = [0usize; 3];
                    for a in 0..3 {
                        let n = f.dims[a];
                        let mut vals: Vec<usize> = cells.iter().map(|c| c[a]).collect();
                        vals.sort_unstable();
                        vals.dedup();
                        anchor[a] = match vals.as_slice() {
                            [v] => *v,
                            [v, w] if (v + 1) % n == *w => *v,
                            [v, w] if (w + 1) % n == *v => *w,
                            _ => return Vec::new(),
                        };
                    }
                    let mut pos = [Vec3::ZERO; 3];
                    for o in 0..3 {
                        let d = f.offset(anchor, cells[o]).expect("within block");
                        pos[o] = p[o] + f.shift(anchor, d);
                    }
                    vec![View { pos, target: None, weight: 1.0 }]
                }
            }
        }
    }
}

/// Reference evaluation over an explicit scope.
pub fn brute_force_scoped(phase: &PhaseSpace, params: &Params, scope: OracleScope) -> Result<OracleResult> {
    let n = phase.len();
    if n > ORACLE_LIMIT {
        return Err(Error::OracleTooLarge { n, limit: ORACLE_LIMIT });
    }
    params.validate()?;
    let bx = *phase.sim_box();
    let frame = match scope {
        OracleScope::Unlimited => None,
        OracleScope::Adjacent { dims } | OracleScope::Traversal { dims, .. } => {
            if dims.iter().any(|&d| d < 3) {
                return Err(Error::config(format!("oracle grid {dims:?} needs at least 3 cells per axis")));
            }
            Some(Frame { dims, lengths: bx.lengths() })
        }
    };
    let cells: Vec<[usize; 3]> = match &frame {
        Some(f) => phase.positions.iter().map(|p| f.cell(*p)).collect(),
        None => vec![[0; 3]; n],
    };
    let near = |a: [usize; 3], b: [usize; 3]| match &frame {
        Some(f) => (0..3).all(|ax| {
            let m = f.dims[ax] as i64;
            let d = (a[ax] as i64 - b[ax] as i64).rem_euclid(m);
            d.min(m - d) <= 2
        }),
        None => true,
    };

    let rc2 = params.rc2();
    let rc6 = params.rc6();
    let pair_mode = params.cutoff == crate::params::CutoffMode::Pair;
    let mut out = OracleResult { forces: vec![Vec3::ZERO; n], ..Default::default() };

    for i in 0..n {
        for j in i + 1..n {
            let r = bx.minimum_image(phase.positions[i] - phase.positions[j]);
            let r2 = r.norm2();
            if r2 <= rc2 {
                let (u, f) = lj_energy_force(r2, params)?;
                out.forces[i] += r * f;
                out.forces[j] -= r * f;
                out.e2 += u;
                out.w2 += f * r2;
                out.accepted_pairs += 1;
            }
        }
    }

    if params.nu == 0.0 {
        return Ok(out);
    }

    for i in 0..n {
        for j in i + 1..n {
            if !near(cells[i], cells[j]) {
                continue;
            }
            if pair_mode && bx.minimum_image(phase.positions[i] - phase.positions[j]).norm2() > rc2 {
                continue;
            }
            for k in j + 1..n {
                if !near(cells[i], cells[k]) || !near(cells[j], cells[k]) {
                    continue;
                }
                let p = [phase.positions[i], phase.positions[j], phase.positions[k]];
                let ids = [i, j, k];
                let mut hit = false;
                for v in views(scope, frame.as_ref(), p, [cells[i], cells[j], cells[k]], phase) {
                    let (rij, rik, rjk) = (v.pos[0] - v.pos[1], v.pos[0] - v.pos[2], v.pos[1] - v.pos[2]);
                    if !params.cutoff.accepts_sq(rij.norm2(), rik.norm2(), rjk.norm2(), rc2, rc6) {
                        continue;
                    }
                    let t = force_triple_from_separations(rij, rik, rjk, params.nu)?;
                    let f = [t.forces.f_i, t.forces.f_j, t.forces.f_k];
                    match v.target {
                        Some(m) => out.forces[ids[m]] += f[m],
                        None => {
                            for m in 0..3 {
                                out.forces[ids[m]] += f[m];
                            }
                        }
                    }
                    out.e3 += v.weight * t.energy;
                    out.w3 += v.weight * t.virial;
                    out.accepted_visits += 1;
                    hit = true;
                }
                if hit {
                    out.accepted_triplets += 1;
                    out.accepted_set.push(ids);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::CutoffMode;
    use crate::pbc::SimBox;
    use crate::potentials::atm_energy;

    fn phase(l: f64, pts: &[Vec3]) -> PhaseSpace {
        PhaseSpace::from_positions(SimBox::cubic(l).unwrap(), pts.to_vec()).unwrap()
    }

    fn equilateral() -> Vec<Vec3> {
        let h = 3f64.sqrt() / 2.0;
        vec![Vec3::new(1.0, 1.0, 1.0), Vec3::new(2.0, 1.0, 1.0), Vec3::new(1.5, 1.0 + h, 1.0)]
    }

    #[test]
    fn equilateral_triplet() {
        let ps = phase(12.5, &equilateral());
        let r = brute_force(&ps, &Params::default(), false).unwrap();
        assert!((r.e3 - 0.099).abs() < 1e-14);
        assert_eq!(r.accepted_triplets, 1);
        assert!((r.w3 - 0.891).abs() < 1e-13);
        assert!(r.forces.iter().copied().sum::<Vec3>().max_abs() < 1e-12);
    }

    #[test]
    fn four_close_particles() {
        let pts =
            [Vec3::new(1.0, 1.0, 1.0), Vec3::new(2.0, 1.0, 1.0), Vec3::new(1.0, 2.0, 1.0), Vec3::new(1.0, 1.0, 2.0)];
        let r = brute_force(&phase(12.5, &pts), &Params::default(), false).unwrap();
        assert_eq!(r.accepted_triplets, 4);
    }

    #[test]
    fn guardrail() {
        let pts: Vec<Vec3> = (0..2001).map(|i| Vec3::new(i as f64 * 0.01, 0.0, 0.0)).collect();
        assert!(matches!(
            brute_force(&phase(30.0, &pts), &Params::default(), false),
            Err(Error::OracleTooLarge { n: 2001, .. })
        ));
    }

    #[test]
    fn energy_is_sum_over_accepted_set() {
        let pts: Vec<Vec3> = (0..30)
            .map(|i| Vec3::new((i * 7 % 11) as f64 * 0.71, (i * 5 % 13) as f64 * 0.6, (i % 4) as f64 * 1.9))
            .collect();
        let ps = phase(8.0, &pts);
        let r = brute_force(&ps, &Params::default(), false).unwrap();
        let b = ps.sim_box();
        let sum: f64 = r
            .accepted_set
            .iter()
            .map(|t| {
                let p = t.map(|i| ps.positions[i]);
                let d = |a: Vec3, c: Vec3| b.minimum_image(a - c).norm();
                atm_energy(d(p[0], p[1]), d(p[0], p[2]), d(p[1], p[2]), 0.072).unwrap()
            })
            .sum();
        assert!((sum - r.e3).abs() <= 1e-12 * r.e3.abs());
        assert!((r.w3 - 9.0 * r.e3).abs() <= 1e-9 * r.e3.abs());
    }

    #[test]
    fn product_scope_views() {
        // Three particles spread along x across cells 0, 1, 2 of a 3-cell axis.
        let pts = [Vec3::new(2.55, 0.5, 0.5), Vec3::new(2.65, 0.5, 0.5), Vec3::new(5.25, 0.5, 0.5)];
        let ps = phase(7.8, &pts);
        let p = Params { cutoff: CutoffMode::Product, ..Params::default() };
        let dims = [3, 3, 3];
        let c08 = brute_force_scoped(&ps, &p, OracleScope::Traversal { kind: TraversalKind::C08, dims }).unwrap();
        assert_eq!(c08.accepted_triplets, 0);
        let c01 = brute_force_scoped(&ps, &p, OracleScope::Traversal { kind: TraversalKind::C01, dims }).unwrap();
        assert!(c01.accepted_visits >= 1);
    }
}
