use crate::cells::{neighborhood_offsets, CellGrid, CellIndex, FORWARD_OFFSETS};
use crate::params::TraversalKind;
use crate::vec3::Vec3;

/// A cell together with the shift applied to its particle positions inside a task.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CellRef {
    pub cell: CellIndex,
    pub shift: Vec3,
}

/// Work anchored at one base cell.
///
/// `cells[0]` is the base; singles, pairs and triplets index into `cells`.
/// For Newton traversals every listed cell is written; otherwise only the base.
#[derive(Clone, Debug)]
pub struct CellTask {
    pub base: CellIndex,
    pub cells: Vec<CellRef>,
    pub singles: Vec<u8>,
    pub pairs: Vec<[u8; 2]>,
    pub triplets: Vec<[u8; 3]>,
    newton: bool,
}

impl CellTask {
    /// Flat indices of the cells whose particles this task mutates.
    pub fn write_set(&self) -> Vec<usize> {
        if self.newton {
            self.cells.iter().map(|c| c.cell.flat).collect()
        } else {
            vec![self.base.flat]
        }
    }

    pub fn pair_refs(&self) -> impl Iterator<Item = [CellRef; 2]> + '_ {
        self.pairs.iter().map(|p| p.map(|i| self.cells[i as usize]))
    }

    pub fn triplet_refs(&self) -> impl Iterator<Item = [CellRef; 3]> + '_ {
        self.triplets.iter().map(|t| t.map(|i| self.cells[i as usize]))
    }
}

/// Color-partitioned tasks of one traversal.
#[derive(Clone, Debug)]
pub struct TraversalSchedule {
    pub kind: TraversalKind,
    pub newton: bool,
    pub colors: Vec<Vec<CellTask>>,
    pub dims: [usize; 3],
    pub periods: [usize; 3],
}

impl TraversalSchedule {
    pub fn num_colors(&self) -> usize {
        self.colors.len()
    }

    pub fn tasks(&self) -> impl Iterator<Item = &CellTask> {
        self.colors.iter().flatten()
    }
}

/// Offsets of the 2x2x2 block anchored at a base cell, x fastest.
pub const BLOCK_OFFSETS: [[i32; 3]; 8] =
    [[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1], [1, 0, 1], [0, 1, 1], [1, 1, 1]];

fn anchored_at_base(members: &[usize]) -> bool {
    (0..3).all(|a| members.iter().any(|&m| BLOCK_OFFSETS[m][a] == 0))
}

/// Cell pairs of the 2x2x2 block whose per-axis minimum is the base (13 shapes).
pub fn block_pair_shapes() -> Vec<[u8; 2]> {
    let mut out = Vec::new();
    for a in 0..8 {
        for b in a + 1..8 {
            if anchored_at_base(&[a, b]) {
                out.push([a as u8, b as u8]);
            }
        }
    }
    out
}

/// Cell triplets of the 2x2x2 block whose per-axis minimum is the base (44 shapes).
pub fn block_triplet_shapes() -> Vec<[u8; 3]> {
    let mut out = Vec::new();
    for a in 0..8 {
        for b in a + 1..8 {
            for c in b + 1..8 {
                if anchored_at_base(&[a, b, c]) {
                    out.push([a as u8, b as u8, c as u8]);
                }
            }
        }
    }
    out
}

/// Per-axis color period: the smallest divisor of the cell count not below `separation`.
pub fn color_periods(dims: [usize; 3], separation: [usize; 3]) -> [usize; 3] {
    [0, 1, 2].map(|a| (separation[a].max(1)..=dims[a]).find(|p| dims[a] % p == 0).unwrap_or(dims[a]))
}

fn colorize(
    grid: &CellGrid,
    kind: TraversalKind,
    periods: [usize; 3],
    mut make: impl FnMut(CellIndex) -> CellTask,
) -> TraversalSchedule {
    let [px, py, pz] = periods;
    let mut colors: Vec<Vec<CellTask>> = (0..px * py * pz).map(|_| Vec::new()).collect();
    for ci in grid.cells() {
        let [x, y, z] = ci.coords;
        colors[x % px + px * (y % py + py * (z % pz))].push(make(ci));
    }
    colors.retain(|c| !c.is_empty());
    TraversalSchedule { kind, newton: kind.newton(), colors, dims: grid.dims(), periods }
}

fn cell_ref(grid: &CellGrid, base: CellIndex, offset: [i32; 3]) -> CellRef {
    let (cell, shift) = grid.neighbor(base, offset);
    CellRef { cell, shift }
}

/// One color; each base visits its whole 27-cell neighborhood and writes only its own particles.
pub fn schedule_3c01(grid: &CellGrid) -> TraversalSchedule {
    let offsets: Vec<[i32; 3]> =
        std::iter::once([0, 0, 0]).chain(neighborhood_offsets().filter(|o| *o != [0, 0, 0])).collect();
    let n = offsets.len() as u8;
    let pairs: Vec<[u8; 2]> = (0..n).map(|m| [0, m]).collect();
    let mut triplets = Vec::with_capacity(377);
    for m in 0..n {
        for k in m..n {
            if (m, k) != (0, 0) {
                triplets.push([0, m, k]);
            }
        }
    }
    colorize(grid, TraversalKind::C01, [1, 1, 1], |base| CellTask {
        base,
        cells: offsets.iter().map(|o| cell_ref(grid, base, *o)).collect(),
        singles: vec![0],
        pairs: pairs.clone(),
        triplets: triplets.clone(),
        newton: false,
    })
}

/// Base plus forward neighbors; triplets are the base with any two distinct forward cells.
pub fn schedule_3c18(grid: &CellGrid) -> TraversalSchedule {
    let periods = color_periods(grid.dims(), [3, 3, 2]);
    let pairs: Vec<[u8; 2]> = (1..=13).map(|m| [0, m]).collect();
    let mut triplets = Vec::with_capacity(78);
    for m in 1..=13u8 {
        for k in m + 1..=13 {
            triplets.push([0, m, k]);
        }
    }
    colorize(grid, TraversalKind::C18, periods, |base| CellTask {
        base,
        cells: std::iter::once(CellRef { cell: base, shift: Vec3::ZERO })
            .chain(FORWARD_OFFSETS.iter().map(|o| cell_ref(grid, base, *o)))
            .collect(),
        singles: vec![0],
        pairs: pairs.clone(),
        triplets: triplets.clone(),
        newton: true,
    })
}

/// The 2x2x2 block anchored at the base; each pair and triplet shape is owned by its minimum corner.
pub fn schedule_3c08(grid: &CellGrid) -> TraversalSchedule {
    let periods = color_periods(grid.dims(), [2, 2, 2]);
    let pairs = block_pair_shapes();
    let triplets = block_triplet_shapes();
    colorize(grid, TraversalKind::C08, periods, |base| CellTask {
        base,
        cells: BLOCK_OFFSETS.iter().map(|o| cell_ref(grid, base, *o)).collect(),
        singles: vec![0],
        pairs: pairs.clone(),
        triplets: triplets.clone(),
        newton: true,
    })
}

pub fn build_schedule(kind: TraversalKind, grid: &CellGrid) -> TraversalSchedule {
    match kind {
        TraversalKind::C01 => schedule_3c01(grid),
        TraversalKind::C18 => schedule_3c18(grid),
        TraversalKind::C08 => schedule_3c08(grid),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pbc::SimBox;
    use std::collections::{BTreeSet, HashMap};

    fn grid(n: usize) -> CellGrid {
        CellGrid::with_dims(SimBox::cubic(2.5 * n as f64).unwrap(), 2.5, [n; 3]).unwrap()
    }

    #[test]
    fn c01_shape() {
        let s = schedule_3c01(&grid(5));
        assert_eq!(s.num_colors(), 1);
        assert_eq!(s.colors[0].len(), 125);
        let t = &s.colors[0][0];
        assert_eq!(t.cells.len(), 27);
        assert_eq!(t.triplets.len(), 27 * 26 / 2 + 26);
        let combos: BTreeSet<(usize, usize)> = t.triplets.iter().map(|x| (x[1] as usize, x[2] as usize)).collect();
        assert_eq!(combos.len(), 377);
        assert_eq!(t.write_set(), vec![t.base.flat]);
    }

    #[test]
    fn c18_shape() {
        let s = schedule_3c18(&grid(6));
        assert_eq!(s.num_colors(), 18);
        let t = &s.colors[0][0];
        assert_eq!((t.singles.len(), t.pairs.len(), t.triplets.len()), (1, 13, 78));
    }

    #[test]
    fn c08_shape() {
        assert_eq!(block_pair_shapes().len(), 13);
        assert_eq!(block_triplet_shapes().len(), 44);
        let s = schedule_3c08(&grid(4));
        assert_eq!(s.num_colors(), 8);
        assert_eq!(s.tasks().count(), 64);
    }

    #[test]
    fn planar_extensions_of_first_forward_pair() {
        // Restricting to the z = 0 plane of a 3x3 neighborhood numbered from 0, base 4.
        let planar: Vec<usize> = (0..13).filter(|&m| FORWARD_OFFSETS[m][2] == 0).collect();
        let label = |m: usize| (4 + FORWARD_OFFSETS[m][0] + 3 * FORWARD_OFFSETS[m][1]) as usize;
        let first = planar[0];
        assert_eq!(label(first), 5);
        let ext: Vec<usize> = planar.iter().filter(|&&m| m > first).map(|&m| label(m)).collect();
        assert_eq!(ext, vec![6, 7, 8]);
    }

    #[test]
    fn periods() {
        assert_eq!(color_periods([6, 6, 6], [3, 3, 2]), [3, 3, 2]);
        assert_eq!(color_periods([4, 4, 4], [3, 3, 2]), [4, 4, 2]);
        assert_eq!(color_periods([5, 5, 5], [2, 2, 2]), [5, 5, 5]);
        assert_eq!(color_periods([15, 15, 15], [3, 3, 2]), [3, 3, 3]);
        assert_eq!(color_periods([3, 3, 3], [1, 1, 1]), [1, 1, 1]);
    }

    #[test]
    fn every_cell_is_base_once_and_colors_disjoint() {
        for n in [3usize, 4, 5, 6, 7] {
            let g = grid(n);
            for kind in TraversalKind::ALL {
                let s = build_schedule(kind, &g);
                let mut bases = HashMap::new();
                for color in &s.colors {
                    let mut written = BTreeSet::new();
                    for t in color {
                        *bases.entry(t.base.flat).or_insert(0) += 1;
                        for c in t.write_set() {
                            assert!(written.insert(c), "{kind} on {n}^3: cell {c} written twice in a color");
                        }
                    }
                }
                assert_eq!(bases.len(), g.num_cells());
                assert!(bases.values().all(|&v| v == 1));
            }
        }
    }

    #[test]
    fn newton_tasks_touch_distinct_cells() {
        for n in [3usize, 4] {
            for kind in [TraversalKind::C18, TraversalKind::C08] {
                let s = build_schedule(kind, &grid(n));
                for t in s.tasks() {
                    let set: BTreeSet<usize> = t.cells.iter().map(|c| c.cell.flat).collect();
                    assert_eq!(set.len(), t.cells.len());
                }
            }
        }
    }
}
