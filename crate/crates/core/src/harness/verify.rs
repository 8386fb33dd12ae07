//! Quick self-checks on small random systems: executor against the oracle,
//! and schedule coverage on small grids.

use std::collections::HashMap;
use std::fmt;

use crate::cells::CellGrid;
use crate::dynamics::init_random;
use crate::error::Result;
use crate::oracle::{brute_force_scoped, OracleScope};
use crate::params::{CutoffMode, Params, TraversalKind};
use crate::pbc::SimBox;
use crate::phase::PhaseSpace;
use crate::traversal::{
    adjacent_pairs, adjacent_triplets, build_schedule, coverage, is_pairwise_adjacent, ForceEngine,
};
use crate::vec3::Vec3;

pub const VERIFY_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for VerifyLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    if d == 0.0 {
        0.0
    } else {
        d / a.abs().max(b.abs())
    }
}

fn force_dev(forces: &[Vec3], reference: &[Vec3]) -> f64 {
    let scale = reference.iter().map(|f| f.max_abs()).fold(0.0, f64::max).max(1e-300);
    forces.iter().zip(reference).map(|(a, b)| (*a - *b).max_abs()).fold(0.0, f64::max) / scale
}

/// Worst deviation of one traversal against its oracle over a few random systems.
fn oracle_line(kind: TraversalKind, cutoff: CutoffMode, seed: u64) -> Result<VerifyLine> {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for (c, &(n, rho)) in [(50usize, 0.1f64), (150, 0.1), (120, 0.08)].iter().enumerate() {
        let bx = SimBox::cubic((n as f64 / rho).cbrt())?;
        let mut phase = PhaseSpace::from_positions(bx, init_random(n, &bx, 0.7, seed + c as u64)?)?;
        let params = Params { traversal: kind, cutoff, ..Params::default() };
        let mut engine = ForceEngine::new(params, bx, 1)?;
        let eval = engine.compute(&mut phase)?;
        let scope = match cutoff {
            CutoffMode::Pair => OracleScope::Unlimited,
            CutoffMode::Product => OracleScope::Traversal { kind, dims: engine.grid().dims() },
        };
        let r = brute_force_scoped(&phase, &params, scope)?;
        let e = eval.energies;
        let dev =
            [force_dev(&phase.forces, &r.forces), rel(e.e2, r.e2), rel(e.e3, r.e3), rel(e.w2, r.w2), rel(e.w3, r.w3)]
                .into_iter()
                .fold(0.0, f64::max);
        worst = worst.max(dev);
        cases += 1;
    }
    Ok(VerifyLine {
        name: format!("oracle {kind} {cutoff}"),
        passed: worst <= VERIFY_TOLERANCE,
        detail: format!("{cases} systems, worst relative deviation {worst:.3e}"),
    })
}

/// Exactly-once emission of adjacent cell pairs and triplets plus disjoint write-sets per color.
pub fn coverage_line(kind: TraversalKind, n: usize) -> Result<VerifyLine> {
    let grid = CellGrid::build(SimBox::cubic(2.5 * n as f64)?, 2.5)?;
    let schedule = build_schedule(kind, &grid);
    let cov = coverage(&schedule, &grid);
    let mut problems = Vec::new();

    let pairs = adjacent_pairs(&grid);
    let bad_pairs = pairs.iter().filter(|k| cov.pairs.get(*k) != Some(&1)).count()
        + cov.pairs.keys().filter(|k| !pairs.contains(*k)).count();
    if bad_pairs > 0 {
        problems.push(format!("{bad_pairs} cell pairs not emitted exactly once"));
    }
    let triplets = adjacent_triplets(&grid);
    let bad_triplets = triplets.iter().filter(|k| cov.triplets.get(*k) != Some(&1)).count()
        + cov.triplets.iter().filter(|(k, &c)| is_pairwise_adjacent(k) && (c != 1 || !triplets.contains(*k))).count();
    if bad_triplets > 0 {
        problems.push(format!("{bad_triplets} adjacent cell triplets not emitted exactly once"));
    }
    if cov.singles.len() != grid.num_cells() || cov.singles.values().any(|&c| c != 1) {
        problems.push("single cells not emitted exactly once".into());
    }
    let mut clashes = 0;
    for tasks in &schedule.colors {
        let mut owner: HashMap<usize, usize> = HashMap::new();
        for (t, task) in tasks.iter().enumerate() {
            for c in task.write_set() {
                if let Some(prev) = owner.insert(c, t) {
                    if prev != t {
                        clashes += 1;
                    }
                }
            }
        }
    }
    if clashes > 0 {
        problems.push(format!("{clashes} write-set overlaps within colors"));
    }
    Ok(VerifyLine {
        name: format!("coverage {kind} {n}^3"),
        passed: problems.is_empty(),
        detail: if problems.is_empty() {
            format!("{} pairs, {} triplets, {} colors", pairs.len(), triplets.len(), schedule.num_colors())
        } else {
            problems.join("; ")
        },
    })
}

pub fn run_verify(seed: u64) -> Result<Vec<VerifyLine>> {
    let mut out = Vec::new();
    for kind in TraversalKind::ALL {
        for cutoff in CutoffMode::ALL {
            out.push(oracle_line(kind, cutoff, seed)?);
        }
    }
    for kind in [TraversalKind::C18, TraversalKind::C08] {
        for n in [4, 6] {
            out.push(coverage_line(kind, n)?);
        }
    }
    Ok(out)
}
