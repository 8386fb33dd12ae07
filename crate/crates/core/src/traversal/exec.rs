use std::ops::Range;
use std::time::Instant;

use rayon::prelude::*;

use super::schedule::{build_schedule, CellTask, TraversalSchedule};
use super::TripletCounters;
use crate::cells::CellGrid;
use crate::error::{Error, Result};
use crate::params::{CutoffMode, Params};
use crate::pbc::SimBox;
use crate::phase::PhaseSpace;
use crate::potentials::{atm_kernel, lj_kernel, MIN_DISTANCE, MIN_DISTANCE_SQ};
use crate::vec3::Vec3;

/// Potential energies and virials of one force evaluation.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Energies {
    pub e2: f64,
    pub e3: f64,
    pub w2: f64,
    pub w3: f64,
}

impl Energies {
    fn add(&mut self, o: &Energies) {
        self.e2 += o.e2;
        self.e3 += o.e3;
        self.w2 += o.w2;
        self.w3 += o.w3;
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ExecOptions {
    /// Collect the particle ids of every accepted triplet visit.
    pub record_triplets: bool,
}

/// Result of one force evaluation.
#[derive(Clone, Debug, Default)]
pub struct Evaluation {
    pub energies: Energies,
    pub counters: TripletCounters,
    /// Wall time of the pair pass.
    pub pair_seconds: f64,
    /// Wall time of the three-body pass.
    pub triplet_seconds: f64,
    /// Sorted particle ids per accepted visit, when requested.
    pub accepted_triplets: Vec<[usize; 3]>,
}

#[derive(Clone, Copy)]
enum Pass {
    Pair,
    Triplet,
}

#[derive(Clone, Copy)]
struct Kernel {
    mode: CutoffMode,
    rc2: f64,
    rc6: f64,
    nu: f64,
    eps4: f64,
    sig2: f64,
    newton: bool,
    record: bool,
}

#[derive(Default)]
struct Scratch {
    pos: Vec<Vec3>,
    ids: Vec<usize>,
    offs: Vec<usize>,
    slots: Vec<usize>,
    force: Vec<Vec3>,
    tab_a: Vec<f64>,
    tab_b: Vec<f64>,
}

#[derive(Default)]
struct TaskOut {
    energies: Energies,
    counters: TripletCounters,
    error: Option<Error>,
    recorded: Vec<[usize; 3]>,
}

/// Raw view of the cell-sorted force array; tasks of one color write disjoint slots.
#[derive(Clone, Copy)]
struct ForceSink(*mut Vec3);

// SAFETY: concurrent tasks only ever touch disjoint index ranges (the coloring contract).
unsafe impl Send for ForceSink {}
unsafe impl Sync for ForceSink {}

const THIRD: f64 = 1.0 / 3.0;

struct Ctx<'a> {
    k: Kernel,
    pos: &'a [Vec3],
    ids: &'a [usize],
    offs: &'a [usize],
    force: &'a mut [Vec3],
    tab_a: &'a mut Vec<f64>,
    tab_b: &'a mut Vec<f64>,
    out: TaskOut,
}

impl Ctx<'_> {
    #[inline(always)]
    fn block(&self, b: u8) -> Range<usize> {
        self.offs[b as usize]..self.offs[b as usize + 1]
    }

    #[cold]
    fn fail(&mut self, r2: f64) {
        if self.out.error.is_none() {
            self.out.error = Some(Error::Coincident { distance: r2.sqrt(), min: MIN_DISTANCE });
        }
    }

    #[inline(always)]
    fn pair(&mut self, i: usize, j: usize, newton: bool) {
        let r = self.pos[i] - self.pos[j];
        let r2 = r.norm2();
        self.out.counters.pairs_traversed += 1;
        if r2 > self.k.rc2 {
            return;
        }
        self.out.counters.pairs_accepted += 1;
        if r2 < MIN_DISTANCE_SQ {
            self.fail(r2);
            return;
        }
        let (u, f) = lj_kernel(r2, self.k.eps4, self.k.sig2);
        let fv = r * f;
        self.force[i] += fv;
        if newton {
            self.force[j] -= fv;
            self.out.energies.e2 += u;
            self.out.energies.w2 += f * r2;
        } else {
            self.out.energies.e2 += 0.5 * u;
            self.out.energies.w2 += 0.5 * f * r2;
        }
    }

    fn lj_single(&mut self, a: u8) {
        let r = self.block(a);
        for i in r.clone() {
            for j in i + 1..r.end {
                self.pair(i, j, true);
            }
        }
    }

    fn lj_cross(&mut self, a: u8, b: u8) {
        let (ra, rb) = (self.block(a), self.block(b));
        for i in ra {
            for j in rb.clone() {
                self.pair(i, j, true);
            }
        }
    }

    fn lj_visit(&mut self, x: u8) {
        let (r0, rx) = (self.block(0), self.block(x));
        for i in r0 {
            for j in rx.clone() {
                if j != i {
                    self.pair(i, j, false);
                }
            }
        }
    }

    #[inline(always)]
    #[allow(clippy::too_many_arguments)]
    fn contribute(&mut self, i: usize, j: usize, k: usize, rij: Vec3, a2: f64, b2: f64, c2: f64) {
        self.out.counters.accepted += 1;
        if a2.min(b2).min(c2) < MIN_DISTANCE_SQ {
            self.fail(a2.min(b2).min(c2));
            return;
        }
        let (u, cij, cik, cjk) = atm_kernel(a2, b2, c2, self.k.nu);
        let rik = self.pos[i] - self.pos[k];
        let fij = rij * cij;
        let fik = rik * cik;
        let w = cij * a2 + cik * b2 + cjk * c2;
        self.force[i] += fij + fik;
        if self.k.newton {
            let fjk = (self.pos[j] - self.pos[k]) * cjk;
            self.force[j] += fjk - fij;
            self.force[k] -= fik + fjk;
            self.out.energies.e3 += u;
            self.out.energies.w3 += w;
        } else {
            self.out.energies.e3 += u * THIRD;
            self.out.energies.w3 += w * THIRD;
        }
        if self.k.record {
            let mut t = [self.ids[i], self.ids[j], self.ids[k]];
            t.sort_unstable();
            self.out.recorded.push(t);
        }
    }

    /// Fills `tab` with squared distances between blocks, row-major over `rows`.
    #[inline]
    fn table(pos: &[Vec3], tab: &mut Vec<f64>, rows: Range<usize>, cols: Range<usize>) {
        tab.clear();
        for i in rows {
            let p = pos[i];
            tab.extend(cols.clone().map(|k| (p - pos[k]).norm2()));
        }
    }

    /// All triplets inside one cell.
    fn newton_single(&mut self, a: u8) {
        let r = self.block(a);
        let n = r.len();
        if n < 3 {
            return;
        }
        let count = (n * (n - 1) * (n - 2) / 6) as u64;
        self.out.counters.traversed += count;
        self.out.counters.one_cell += count;
        Self::table(self.pos, self.tab_a, r.clone(), r.clone());
        let pair = self.k.mode == CutoffMode::Pair;
        let (rc2, rc6) = (self.k.rc2, self.k.rc6);
        for il in 0..n {
            for jl in il + 1..n {
                let a2 = self.tab_a[il * n + jl];
                if pair && a2 > rc2 {
                    continue;
                }
                let (i, j) = (r.start + il, r.start + jl);
                let rij = self.pos[i] - self.pos[j];
                for kl in jl + 1..n {
                    let b2 = self.tab_a[il * n + kl];
                    let c2 = self.tab_a[jl * n + kl];
                    if self.k.mode.accepts_sq(a2, b2, c2, rc2, rc6) {
                        self.contribute(i, j, r.start + kl, rij, a2, b2, c2);
                    }
                }
            }
        }
    }

    /// Two particles in one cell and one in the other, both ways round.
    fn newton_split(&mut self, a: u8, b: u8) {
        let (ra, rb) = (self.block(a), self.block(b));
        let (na, nb) = (ra.len(), rb.len());
        if na == 0 || nb == 0 {
            return;
        }
        let count = (nb * na * (na - 1) / 2 + na * nb * (nb - 1) / 2) as u64;
        self.out.counters.traversed += count;
        self.out.counters.two_cell += count;
        Self::table(self.pos, self.tab_a, ra.clone(), rb.clone());
        Self::table(self.pos, self.tab_b, rb.clone(), rb.clone());
        let pair = self.k.mode == CutoffMode::Pair;
        let (rc2, rc6) = (self.k.rc2, self.k.rc6);
        for il in 0..na {
            let i = ra.start + il;
            for jl in il + 1..na {
                let j = ra.start + jl;
                let rij = self.pos[i] - self.pos[j];
                let a2 = rij.norm2();
                if pair && a2 > rc2 {
                    continue;
                }
                for kl in 0..nb {
                    let b2 = self.tab_a[il * nb + kl];
                    let c2 = self.tab_a[jl * nb + kl];
                    if self.k.mode.accepts_sq(a2, b2, c2, rc2, rc6) {
                        self.contribute(i, j, rb.start + kl, rij, a2, b2, c2);
                    }
                }
            }
        }
        for il in 0..na {
            let i = ra.start + il;
            for jl in 0..nb {
                let a2 = self.tab_a[il * nb + jl];
                if pair && a2 > rc2 {
                    continue;
                }
                let j = rb.start + jl;
                let rij = self.pos[i] - self.pos[j];
                for kl in jl + 1..nb {
                    let b2 = self.tab_a[il * nb + kl];
                    let c2 = self.tab_b[jl * nb + kl];
                    if self.k.mode.accepts_sq(a2, b2, c2, rc2, rc6) {
                        self.contribute(i, j, rb.start + kl, rij, a2, b2, c2);
                    }
                }
            }
        }
    }

    /// Cartesian product of three distinct cells.
    fn newton_three(&mut self, a: u8, b: u8, c: u8) {
        let (ra, rb, rc) = (self.block(a), self.block(b), self.block(c));
        let (na, nb, nc) = (ra.len(), rb.len(), rc.len());
        if na == 0 || nb == 0 || nc == 0 {
            return;
        }
        let count = (na * nb * nc) as u64;
        self.out.counters.traversed += count;
        self.out.counters.three_cell += count;
        Self::table(self.pos, self.tab_a, ra.clone(), rc.clone());
        Self::table(self.pos, self.tab_b, rb.clone(), rc.clone());
        let pair = self.k.mode == CutoffMode::Pair;
        let (rc2, rc6) = (self.k.rc2, self.k.rc6);
        for il in 0..na {
            let i = ra.start + il;
            for jl in 0..nb {
                let j = rb.start + jl;
                let rij = self.pos[i] - self.pos[j];
                let a2 = rij.norm2();
                if pair && a2 > rc2 {
                    continue;
                }
                for kl in 0..nc {
                    let b2 = self.tab_a[il * nc + kl];
                    let c2 = self.tab_b[jl * nc + kl];
                    if self.k.mode.accepts_sq(a2, b2, c2, rc2, rc6) {
                        self.contribute(i, j, rc.start + kl, rij, a2, b2, c2);
                    }
                }
            }
        }
    }

    /// Visits from the base (block 0): i in the base, j in block `x`, k in block `y`;
    /// i is never its own partner and `x == y` draws unordered partners.
    fn visit(&mut self, x: u8, y: u8) {
        let (r0, rx, ry) = (self.block(0), self.block(x), self.block(y));
        let (n0, nx, ny) = (r0.len(), rx.len(), ry.len());
        if n0 == 0 || nx == 0 || ny == 0 {
            return;
        }
        let same = x == y;
        let distinct = 1 + usize::from(x != 0) + usize::from(y != 0 && y != x);
        Self::table(self.pos, self.tab_a, r0.clone(), ry.clone());
        Self::table(self.pos, self.tab_b, rx.clone(), ry.clone());
        let pair = self.k.mode == CutoffMode::Pair;
        let (rc2, rc6) = (self.k.rc2, self.k.rc6);
        let mut count = 0u64;
        for il in 0..n0 {
            let i = r0.start + il;
            for jl in 0..nx {
                if x == 0 && jl == il {
                    continue;
                }
                let k0 = if same { jl + 1 } else { 0 };
                count += (ny - k0 - usize::from(y == 0 && il >= k0)) as u64;
                let j = rx.start + jl;
                let rij = self.pos[i] - self.pos[j];
                let a2 = rij.norm2();
                if pair && a2 > rc2 {
                    continue;
                }
                for kl in k0..ny {
                    if y == 0 && kl == il {
                        continue;
                    }
                    let b2 = self.tab_a[il * ny + kl];
                    let c2 = self.tab_b[jl * ny + kl];
                    if self.k.mode.accepts_sq(a2, b2, c2, rc2, rc6) {
                        self.contribute(i, j, ry.start + kl, rij, a2, b2, c2);
                    }
                }
            }
        }
        self.out.counters.traversed += count;
        match distinct {
            1 => self.out.counters.one_cell += count,
            2 => self.out.counters.two_cell += count,
            _ => self.out.counters.three_cell += count,
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn run_task(
    task: &CellTask,
    grid: &CellGrid,
    spos: &[Vec3],
    members: &[usize],
    k: Kernel,
    pass: Pass,
    scratch: &mut Scratch,
    sink: ForceSink,
) -> TaskOut {
    let Scratch { pos, ids, offs, slots, force, tab_a, tab_b } = scratch;
    pos.clear();
    ids.clear();
    offs.clear();
    slots.clear();
    for cref in &task.cells {
        let r = grid.slot_range(cref.cell.flat);
        slots.push(r.start);
        offs.push(pos.len());
        for s in r {
            pos.push(spos[s] + cref.shift);
            ids.push(members[s]);
        }
    }
    offs.push(pos.len());
    force.clear();
    force.resize(pos.len(), Vec3::ZERO);

    let mut ctx = Ctx {
        k,
        pos: pos.as_slice(),
        ids: ids.as_slice(),
        offs: offs.as_slice(),
        force: force.as_mut_slice(),
        tab_a,
        tab_b,
        out: TaskOut::default(),
    };
    match (pass, k.newton) {
        (Pass::Pair, true) => {
            for &s in &task.singles {
                ctx.lj_single(s);
            }
            for &[a, b] in &task.pairs {
                ctx.lj_cross(a, b);
            }
        }
        (Pass::Pair, false) => {
            for &[_, x] in &task.pairs {
                ctx.lj_visit(x);
            }
        }
        (Pass::Triplet, true) => {
            for &s in &task.singles {
                ctx.newton_single(s);
            }
            for &[a, b] in &task.pairs {
                ctx.newton_split(a, b);
            }
            for &[a, b, c] in &task.triplets {
                ctx.newton_three(a, b, c);
            }
        }
        (Pass::Triplet, false) => {
            for _ in &task.singles {
                ctx.visit(0, 0);
            }
            for &[_, x, y] in &task.triplets {
                ctx.visit(x, y);
            }
        }
    }
    let out = ctx.out;

    let written = if k.newton { task.cells.len() } else { 1 };
    for c in 0..written {
        for (n, l) in (offs[c]..offs[c + 1]).enumerate() {
            // SAFETY: slot belongs to a cell in this task's write-set; no other task of
            // the running color writes that cell, and `slots[c] + n` is within the array.
            unsafe {
                *sink.0.add(slots[c] + n) += force[l];
            }
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn run_pass(
    schedule: &TraversalSchedule,
    grid: &CellGrid,
    spos: &[Vec3],
    sforce: &mut [Vec3],
    k: Kernel,
    pass: Pass,
    parallel: bool,
    eval: &mut Evaluation,
) -> Result<()> {
    let members = grid.sorted_members();
    let sink = ForceSink(sforce.as_mut_ptr());
    let mut scratch = Scratch::default();
    for color in &schedule.colors {
        let outs: Vec<TaskOut> = if parallel && color.len() > 1 {
            color
                .par_iter()
                .map_init(Scratch::default, |s, t| run_task(t, grid, spos, members, k, pass, s, sink))
                .collect()
        } else {
            color.iter().map(|t| run_task(t, grid, spos, members, k, pass, &mut scratch, sink)).collect()
        };
        for o in outs {
            if let Some(e) = o.error {
                return Err(e);
            }
            eval.energies.add(&o.energies);
            eval.counters += o.counters;
            eval.accepted_triplets.extend(o.recorded);
        }
    }
    Ok(())
}

fn run(
    schedule: &TraversalSchedule,
    grid: &CellGrid,
    phase: &mut PhaseSpace,
    params: &Params,
    opts: ExecOptions,
    parallel: bool,
) -> Result<Evaluation> {
    if schedule.dims != grid.dims() {
        return Err(Error::config(format!("schedule built for {:?} cells, grid has {:?}", schedule.dims, grid.dims())));
    }
    let members = grid.sorted_members();
    if members.len() != phase.len() {
        return Err(Error::config(format!("grid holds {} particles, phase space {}", members.len(), phase.len())));
    }
    let spos: Vec<Vec3> = members.iter().map(|&i| phase.positions[i]).collect();
    let mut sforce = vec![Vec3::ZERO; spos.len()];
    let k = Kernel {
        mode: params.cutoff,
        rc2: params.rc2(),
        rc6: params.rc6(),
        nu: params.nu,
        eps4: 4.0 * params.epsilon,
        sig2: params.sigma * params.sigma,
        newton: schedule.newton,
        record: opts.record_triplets,
    };
    let mut eval = Evaluation::default();
    let t0 = Instant::now();
    run_pass(schedule, grid, &spos, &mut sforce, k, Pass::Pair, parallel, &mut eval)?;
    eval.pair_seconds = t0.elapsed().as_secs_f64();
    if params.nu != 0.0 {
        let t1 = Instant::now();
        run_pass(schedule, grid, &spos, &mut sforce, k, Pass::Triplet, parallel, &mut eval)?;
        eval.triplet_seconds = t1.elapsed().as_secs_f64();
    }
    for (&i, f) in members.iter().zip(&sforce) {
        phase.forces[i] += *f;
    }
    Ok(eval)
}

/// Runs a schedule on the current rayon pool.
///
/// Particles must already be binned into `grid` and forces zeroed. Counters are added to `counters`.
pub fn execute(
    schedule: &TraversalSchedule,
    grid: &CellGrid,
    phase: &mut PhaseSpace,
    params: &Params,
    counters: &mut TripletCounters,
) -> Result<Energies> {
    let eval = run(schedule, grid, phase, params, ExecOptions::default(), rayon::current_num_threads() > 1)?;
    *counters += eval.counters;
    Ok(eval.energies)
}

/// Grid, schedule and worker pool for repeated force evaluations on one box.
pub struct ForceEngine {
    params: Params,
    grid: CellGrid,
    schedule: TraversalSchedule,
    pool: Option<rayon::ThreadPool>,
    threads: usize,
}

impl ForceEngine {
    pub fn new(params: Params, sim_box: SimBox, threads: usize) -> Result<Self> {
        params.validate()?;
        sim_box.check_cutoff(params.r_c)?;
        let grid = CellGrid::build(sim_box, params.r_c)?;
        Self::from_grid(params, grid, threads)
    }

    /// Uses an explicit cell count per axis.
    pub fn with_dims(params: Params, sim_box: SimBox, dims: [usize; 3], threads: usize) -> Result<Self> {
        params.validate()?;
        sim_box.check_cutoff(params.r_c)?;
        let grid = CellGrid::with_dims(sim_box, params.r_c, dims)?;
        Self::from_grid(params, grid, threads)
    }

    fn from_grid(params: Params, grid: CellGrid, threads: usize) -> Result<Self> {
        if threads == 0 {
            return Err(Error::config("threads must be at least 1"));
        }
        let pool = if threads > 1 {
            Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build()
                    .map_err(|e| Error::config(format!("thread pool: {e}")))?,
            )
        } else {
            None
        };
        let schedule = build_schedule(params.traversal, &grid);
        Ok(ForceEngine { params, grid, schedule, pool, threads })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn grid(&self) -> &CellGrid {
        &self.grid
    }

    pub fn schedule(&self) -> &TraversalSchedule {
        &self.schedule
    }

    pub fn threads(&self) -> usize {
        self.threads
    }

    pub fn set_nu(&mut self, nu: f64) -> Result<()> {
        let params = Params { nu, ..self.params };
        params.validate()?;
        self.params = params;
        Ok(())
    }

    /// Rebuilds grid and schedule for a new box.
    pub fn resize(&mut self, sim_box: SimBox) -> Result<()> {
        sim_box.check_cutoff(self.params.r_c)?;
        self.grid = CellGrid::build(sim_box, self.params.r_c)?;
        self.schedule = build_schedule(self.params.traversal, &self.grid);
        Ok(())
    }

    /// Bins, zeroes and recomputes all forces.
    pub fn compute(&mut self, phase: &mut PhaseSpace) -> Result<Evaluation> {
        self.compute_with(phase, ExecOptions::default())
    }

    pub fn compute_with(&mut self, phase: &mut PhaseSpace, opts: ExecOptions) -> Result<Evaluation> {
        if phase.sim_box() != self.grid.sim_box() {
            return Err(Error::config("phase space box differs from the engine's box"));
        }
        self.grid.bin(&phase.positions);
        phase.zero_forces();
        let (schedule, grid, params) = (&self.schedule, &self.grid, &self.params);
        match &self.pool {
            Some(pool) => pool.install(|| run(schedule, grid, phase, params, opts, true)),
            None => run(schedule, grid, phase, params, opts, false),
        }
    }
}
