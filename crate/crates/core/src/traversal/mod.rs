//! Cell-triplet traversals, their colorings and the force executor.

mod coverage;
mod exec;
mod schedule;

pub use coverage::{adjacent_pairs, adjacent_triplets, coverage, is_pairwise_adjacent, CellShape, Coverage};
pub use exec::{execute, Energies, Evaluation, ExecOptions, ForceEngine};
pub use schedule::{
    block_pair_shapes, block_triplet_shapes, build_schedule, color_periods, schedule_3c01, schedule_3c08,
    schedule_3c18, CellRef, CellTask, TraversalSchedule, BLOCK_OFFSETS,
};

use std::ops::AddAssign;

use crate::error::{Error, Result};

/// Distance-evaluation and acceptance counts of one or more force evaluations.
///
/// `one_cell`, `two_cell` and `three_cell` split `traversed` by the number of
/// distinct cells the candidate triplet was drawn from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TripletCounters {
    pub traversed: u64,
    pub accepted: u64,
    pub pairs_traversed: u64,
    pub pairs_accepted: u64,
    pub one_cell: u64,
    pub two_cell: u64,
    pub three_cell: u64,
}

impl AddAssign for TripletCounters {
    fn add_assign(&mut self, o: Self) {
        self.traversed += o.traversed;
        self.accepted += o.accepted;
        self.pairs_traversed += o.pairs_traversed;
        self.pairs_accepted += o.pairs_accepted;
        self.one_cell += o.one_cell;
        self.two_cell += o.two_cell;
        self.three_cell += o.three_cell;
    }
}

/// Percentage of traversed triplets that passed the cutoff.
pub fn hitrate(counters: &TripletCounters) -> Result<f64> {
    if counters.traversed == 0 {
        return Err(Error::NoTraversal);
    }
    Ok(100.0 * counters.accepted as f64 / counters.traversed as f64)
}
