#![allow(dead_code)]

use tribody::dynamics::init_random;
use tribody::oracle::{brute_force_scoped, OracleResult, OracleScope};
use tribody::{CutoffMode, Evaluation, ExecOptions, ForceEngine, Params, PhaseSpace, SimBox, TraversalKind, Vec3};

/// (N, density) combinations whose boxes hold at least three cells of side 2.5 per axis.
pub const FEASIBLE_STATES: [(usize, f64); 5] = [(50, 0.1), (150, 0.1), (400, 0.1), (400, 0.65), (400, 0.817)];

pub fn random_phase(n: usize, rho: f64, seed: u64) -> PhaseSpace {
    let l = (n as f64 / rho).cbrt();
    let b = SimBox::cubic(l).unwrap();
    let pts = init_random(n, &b, 0.7, seed).unwrap();
    PhaseSpace::from_positions(b, pts).unwrap()
}

pub fn params(kind: TraversalKind, cutoff: CutoffMode) -> Params {
    Params { traversal: kind, cutoff, ..Params::default() }
}

pub fn evaluate(phase: &PhaseSpace, p: Params, record: bool) -> (PhaseSpace, Evaluation, [usize; 3]) {
    let mut ps = phase.clone();
    let mut e = ForceEngine::new(p, *ps.sim_box(), 1).unwrap();
    let ev = e.compute_with(&mut ps, ExecOptions { record_triplets: record }).unwrap();
    let dims = e.grid().dims();
    (ps, ev, dims)
}

pub fn rel(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    if d == 0.0 {
        0.0
    } else {
        d / a.abs().max(b.abs())
    }
}

/// Largest componentwise force deviation relative to the largest oracle force component.
pub fn force_dev(forces: &[Vec3], reference: &[Vec3]) -> f64 {
    let scale = reference.iter().map(|f| f.max_abs()).fold(0.0, f64::max).max(1e-300);
    forces.iter().zip(reference).map(|(a, b)| (*a - *b).max_abs()).fold(0.0, f64::max) / scale
}

/// Worst relative deviation across forces, E2, E3, W2, W3.
pub fn worst_deviation(ps: &PhaseSpace, ev: &Evaluation, r: &OracleResult) -> f64 {
    let e = &ev.energies;
    [force_dev(&ps.forces, &r.forces), rel(e.e2, r.e2), rel(e.e3, r.e3), rel(e.w2, r.w2), rel(e.w3, r.w3)]
        .into_iter()
        .fold(0.0, f64::max)
}

pub fn oracle(phase: &PhaseSpace, p: &Params, scope: OracleScope) -> OracleResult {
    brute_force_scoped(phase, p, scope).unwrap()
}

pub fn distinct_sorted(mut v: Vec<[usize; 3]>) -> Vec<[usize; 3]> {
    v.sort_unstable();
    v.dedup();
    v
}
