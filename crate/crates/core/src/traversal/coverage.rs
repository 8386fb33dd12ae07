//! Cell-level bookkeeping of what a schedule emits, for exactly-once checks.

use std::collections::{BTreeMap, HashMap, HashSet};

use super::schedule::{CellRef, TraversalSchedule};
use crate::cells::{neighborhood_offsets, CellGrid};

/// Periodic cell multiset: the lexicographically smallest unwrapped cell
/// (wrapped into the grid) plus the offsets of the others from it.
pub type CellShape = ([usize; 3], Vec<[i64; 3]>);

#[derive(Clone, Debug, Default)]
pub struct Coverage {
    /// Emission count per distinct-cell pair.
    pub pairs: HashMap<CellShape, usize>,
    /// Emission count per distinct-cell triplet.
    pub triplets: HashMap<CellShape, usize>,
    /// Emission count per single cell.
    pub singles: BTreeMap<usize, usize>,
    /// Color index per base cell.
    pub color_of_base: HashMap<usize, usize>,
}

fn unwrapped(grid: &CellGrid, r: &CellRef) -> [i64; 3] {
    let l = grid.sim_box().lengths();
    let d = grid.dims();
    [0, 1, 2].map(|a| r.cell.coords[a] as i64 + (r.shift[a] / l[a]).round() as i64 * d[a] as i64)
}

fn canonical(grid: &CellGrid, mut pts: Vec<[i64; 3]>) -> CellShape {
    pts.sort();
    let d = grid.dims();
    let p0 = pts[0];
    let base = [0, 1, 2].map(|a| p0[a].rem_euclid(d[a] as i64) as usize);
    (base, pts[1..].iter().map(|p| [0, 1, 2].map(|a| p[a] - p0[a])).collect())
}

fn adjacent(a: [i64; 3], b: [i64; 3]) -> bool {
    (0..3).all(|k| (a[k] - b[k]).abs() <= 1)
}

/// True when the unwrapped cells of the shape are distinct and pairwise adjacent.
pub fn is_pairwise_adjacent(shape: &CellShape) -> bool {
    let mut pts = vec![[0i64; 3]];
    pts.extend(shape.1.iter().copied());
    let distinct: HashSet<_> = pts.iter().collect();
    distinct.len() == pts.len() && pts.iter().all(|a| pts.iter().all(|b| adjacent(*a, *b)))
}

pub fn coverage(schedule: &TraversalSchedule, grid: &CellGrid) -> Coverage {
    let mut cov = Coverage::default();
    for (color, tasks) in schedule.colors.iter().enumerate() {
        for task in tasks {
            cov.color_of_base.insert(task.base.flat, color);
            for &s in &task.singles {
                *cov.singles.entry(task.cells[s as usize].cell.flat).or_default() += 1;
            }
            for pr in task.pair_refs() {
                let pts = pr.iter().map(|r| unwrapped(grid, r)).collect();
                *cov.pairs.entry(canonical(grid, pts)).or_default() += 1;
            }
            for tr in task.triplet_refs() {
                let pts = tr.iter().map(|r| unwrapped(grid, r)).collect();
                *cov.triplets.entry(canonical(grid, pts)).or_default() += 1;
            }
        }
    }
    cov
}

/// Every unordered pair of distinct adjacent cells.
pub fn adjacent_pairs(grid: &CellGrid) -> HashSet<CellShape> {
    let offs = upper_offsets();
    grid.cells().flat_map(|c| offs.iter().map(move |o| (c.coords, vec![*o]))).collect()
}

fn upper_offsets() -> Vec<[i64; 3]> {
    neighborhood_offsets().map(|o| o.map(i64::from)).filter(|o| *o > [0, 0, 0]).collect()
}

/// Every unordered triplet of distinct, pairwise adjacent cells.
pub fn adjacent_triplets(grid: &CellGrid) -> HashSet<CellShape> {
    let offs = upper_offsets();
    let mut out = HashSet::new();
    for c in grid.cells() {
        for (x, a) in offs.iter().enumerate() {
            for b in &offs[x + 1..] {
                if adjacent(*a, *b) {
                    out.insert((c.coords, if a < b { vec![*a, *b] } else { vec![*b, *a] }));
                }
            }
        }
    }
    out
}
