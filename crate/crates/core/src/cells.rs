//! Linked-cell grid: lexicographic indexing, binning and periodic neighbor arithmetic.

use crate::error::{Error, Result};
use crate::pbc::SimBox;
use crate::vec3::Vec3;

/// Offsets of the 13 forward neighbors, in ascending unwrapped lexicographic order
/// (x fastest, then the y row, then the z plane).
pub const FORWARD_OFFSETS: [[i32; 3]; 13] = [
    [1, 0, 0],
    [-1, 1, 0],
    [0, 1, 0],
    [1, 1, 0],
    [-1, -1, 1],
    [0, -1, 1],
    [1, -1, 1],
    [-1, 0, 1],
    [0, 0, 1],
    [1, 0, 1],
    [-1, 1, 1],
    [0, 1, 1],
    [1, 1, 1],
];

/// All 27 offsets of the closed neighborhood, lexicographic order.
pub fn neighborhood_offsets() -> impl Iterator<Item = [i32; 3]> {
    (-1..=1).flat_map(|dz| (-1..=1).flat_map(move |dy| (-1..=1).map(move |dx| [dx, dy, dz])))
}

/// A cell addressed both by flat index and by coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellIndex {
    pub flat: usize,
    pub coords: [usize; 3],
}

/// Periodic grid of cells with side at least `r_c`, plus a compressed particle binning.
#[derive(Clone, Debug)]
pub struct CellGrid {
    dims: [usize; 3],
    cell_len: Vec3,
    sim_box: SimBox,
    /// `starts[c]..starts[c + 1]` indexes `members` for cell `c`.
    starts: Vec<usize>,
    members: Vec<usize>,
}

impl CellGrid {
    /// `floor(L / r_c)` cells per axis; at least three are required.
    pub fn build(sim_box: SimBox, r_c: f64) -> Result<Self> {
        if !(r_c.is_finite() && r_c > 0.0) {
            return Err(Error::config(format!("cutoff must be positive, got {r_c}")));
        }
        let l = sim_box.lengths();
        let dims = [0, 1, 2].map(|a| (l[a] / r_c).floor() as usize);
        Self::with_dims(sim_box, r_c, dims)
    }

    /// Explicit cell counts; each cell side must still be at least `r_c`.
    pub fn with_dims(sim_box: SimBox, r_c: f64, dims: [usize; 3]) -> Result<Self> {
        let l = sim_box.lengths();
        for a in 0..3 {
            if dims[a] < 3 {
                return Err(Error::config(format!(
                    "axis {a}: box length {} gives {} cells of side >= r_c = {r_c}; at least 3 are required",
                    l[a], dims[a]
                )));
            }
            if l[a] / (dims[a] as f64) < r_c * (1.0 - 1e-12) {
                return Err(Error::config(format!("axis {a}: {} cells are narrower than r_c = {r_c}", dims[a])));
            }
        }
        let cell_len = Vec3::new(l.x / dims[0] as f64, l.y / dims[1] as f64, l.z / dims[2] as f64);
        let n = dims[0] * dims[1] * dims[2];
        Ok(CellGrid { dims, cell_len, sim_box, starts: vec![0; n + 1], members: Vec::new() })
    }

    #[inline]
    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    #[inline]
    pub fn num_cells(&self) -> usize {
        self.dims[0] * self.dims[1] * self.dims[2]
    }

    #[inline]
    pub fn cell_len(&self) -> Vec3 {
        self.cell_len
    }

    #[inline]
    pub fn sim_box(&self) -> &SimBox {
        &self.sim_box
    }

    #[inline]
    pub fn flat(&self, coords: [usize; 3]) -> usize {
        coords[0] + self.dims[0] * (coords[1] + self.dims[1] * coords[2])
    }

    #[inline]
    pub fn coords(&self, flat: usize) -> [usize; 3] {
        let [nx, ny, _] = self.dims;
        [flat % nx, (flat / nx) % ny, flat / (nx * ny)]
    }

    pub fn index(&self, flat: usize) -> CellIndex {
        CellIndex { flat, coords: self.coords(flat) }
    }

    pub fn cells(&self) -> impl Iterator<Item = CellIndex> + '_ {
        (0..self.num_cells()).map(|f| self.index(f))
    }

    /// Cell coordinates of a wrapped position, clamped against rounding at the upper edge.
    #[inline]
    pub fn cell_coords_of(&self, p: Vec3) -> [usize; 3] {
        [0, 1, 2].map(|a| {
            let c = (p[a] / self.cell_len[a]).floor();
            if c <= 0.0 {
                0
            } else {
                (c as usize).min(self.dims[a] - 1)
            }
        })
    }

    #[inline]
    pub fn cell_of(&self, p: Vec3) -> usize {
        self.flat(self.cell_coords_of(p))
    }

    /// Counting-sort the particles into cells; each bin lists ascending particle indices.
    pub fn bin(&mut self, positions: &[Vec3]) {
        let n = self.num_cells();
        let cell: Vec<usize> = positions.iter().map(|p| self.cell_of(*p)).collect();
        self.starts.clear();
        self.starts.resize(n + 1, 0);
        for &c in &cell {
            self.starts[c + 1] += 1;
        }
        for c in 0..n {
            self.starts[c + 1] += self.starts[c];
        }
        let mut fill = self.starts.clone();
        self.members.clear();
        self.members.resize(positions.len(), 0);
        for (i, &c) in cell.iter().enumerate() {
            self.members[fill[c]] = i;
            fill[c] += 1;
        }
    }

    /// Particle indices of one cell.
    #[inline]
    pub fn bin_members(&self, flat: usize) -> &[usize] {
        &self.members[self.starts[flat]..self.starts[flat + 1]]
    }

    /// Slot range of one cell within [`CellGrid::sorted_members`].
    #[inline]
    pub fn slot_range(&self, flat: usize) -> std::ops::Range<usize> {
        self.starts[flat]..self.starts[flat + 1]
    }

    /// All particle indices in cell order.
    #[inline]
    pub fn sorted_members(&self) -> &[usize] {
        &self.members
    }

    #[inline]
    pub fn occupancy(&self, flat: usize) -> usize {
        self.starts[flat + 1] - self.starts[flat]
    }

    pub fn total_binned(&self) -> usize {
        self.members.len()
    }

    /// Periodic neighbor and the shift to add to its particle positions.
    pub fn neighbor(&self, ci: CellIndex, offset: [i32; 3]) -> (CellIndex, Vec3) {
        let l = self.sim_box.lengths();
        let mut coords = [0usize; 3];
        let mut shift = [0.0f64; 3];
        for a in 0..3 {
            let n = self.dims[a] as i64;
            let c = ci.coords[a] as i64 + offset[a] as i64;
            let wrapped = c.rem_euclid(n);
            coords[a] = wrapped as usize;
            shift[a] = ((c - wrapped) / n) as f64 * l[a];
        }
        (CellIndex { flat: self.flat(coords), coords }, Vec3::from_array(shift))
    }

    pub fn forward_neighbors(&self, ci: CellIndex) -> Vec<(CellIndex, Vec3)> {
        FORWARD_OFFSETS.iter().map(|o| self.neighbor(ci, *o)).collect()
    }
}

/// Convenience wrapper matching [`CellGrid::build`].
pub fn build_grid(sim_box: SimBox, r_c: f64) -> Result<CellGrid> {
    CellGrid::build(sim_box, r_c)
}

/// Convenience wrapper matching [`CellGrid::bin`].
pub fn bin_particles(grid: &mut CellGrid, positions: &[Vec3]) {
    grid.bin(positions)
}
