//! Integrator invariants: energy drift, momentum, time reversal, thread determinism.

use tribody::dynamics::{init_random, init_velocities, step, Thermostat};
use tribody::potentials::lj_energy_force;
use tribody::{CutoffMode, ForceEngine, Params, PhaseSpace, SimBox, TraversalKind};

fn equilibrated(n: usize, l: f64, t: f64, steps: usize, p: Params, seed: u64) -> (PhaseSpace, ForceEngine) {
    let bx = SimBox::cubic(l).unwrap();
    let pts = init_random(n, &bx, 0.9, seed).unwrap();
    let v = init_velocities(n, t, p.mass, seed + 1).unwrap();
    let mut phase = PhaseSpace::from_positions(bx, pts).unwrap().with_velocities(v).unwrap();
    let mut engine = ForceEngine::new(p, bx, 1).unwrap();
    engine.compute(&mut phase).unwrap();
    let th = Thermostat::rescale(t).unwrap();
    for _ in 0..steps {
        step(&mut phase, &mut engine, &th).unwrap();
    }
    (phase, engine)
}

#[test]
fn nve_energy_drift() {
    let p = Params { cutoff: CutoffMode::Pair, traversal: TraversalKind::C08, ..Params::default() };
    let (mut phase, mut engine) = equilibrated(100, 7.5, 1.0, 2000, p, 11);
    let (u_rc, _) = lj_energy_force(p.r_c * p.r_c, &p).unwrap();
    // pair energies counted as if shifted to zero at the cutoff, which removes the truncation jumps
    let energy = |phase: &PhaseSpace, ev: &tribody::Evaluation| {
        ev.energies.e2 - ev.counters.pairs_accepted as f64 * u_rc + ev.energies.e3 + phase.kinetic_energy(p.mass)
    };
    let ev = engine.compute(&mut phase).unwrap();
    let e0 = energy(&phase, &ev);
    let mut kin = 0.0;
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let ev = step(&mut phase, &mut engine, &Thermostat::off()).unwrap();
        worst = worst.max((energy(&phase, &ev) - e0).abs());
        kin += phase.kinetic_energy(p.mass) / 1000.0;
    }
    let scale = e0.abs().max(kin);
    eprintln!("nve drift {:.3e} (scale {scale:.3})", worst / scale);
    assert!(worst / scale <= 1e-3, "drift {worst:e} against scale {scale}");
}

#[test]
fn momentum_is_conserved() {
    for kind in TraversalKind::ALL {
        let p = Params { traversal: kind, ..Params::default() };
        let (mut phase, mut engine) = equilibrated(120, 7.6, 1.2, 0, p, 3);
        let p0 = phase.total_momentum(1.0);
        for _ in 0..1000 {
            step(&mut phase, &mut engine, &Thermostat::off()).unwrap();
        }
        let dp = (phase.total_momentum(1.0) - p0).max_abs();
        assert!(dp <= 1e-10, "{kind}: {dp:e}");
    }
}

#[test]
fn one_step_reverses() {
    let p = Params::default();
    let (mut phase, mut engine) = equilibrated(120, 7.6, 1.0, 100, p, 5);
    let start = phase.positions.clone();
    step(&mut phase, &mut engine, &Thermostat::off()).unwrap();
    for v in &mut phase.velocities {
        *v = -*v;
    }
    step(&mut phase, &mut engine, &Thermostat::off()).unwrap();
    let bx = *phase.sim_box();
    let dev = phase.positions.iter().zip(&start).map(|(a, b)| bx.minimum_image(*a - *b).max_abs()).fold(0.0, f64::max);
    assert!(dev <= 1e-10, "{dev:e}");
}

#[test]
fn trajectories_do_not_depend_on_threads() {
    for kind in TraversalKind::ALL {
        for cutoff in CutoffMode::ALL {
            let p = Params { traversal: kind, cutoff, ..Params::default() };
            let bx = SimBox::cubic(10.0).unwrap();
            let pts = init_random(400, &bx, 0.85, 21).unwrap();
            let v = init_velocities(400, 1.0, 1.0, 22).unwrap();
            let start = PhaseSpace::from_positions(bx, pts).unwrap().with_velocities(v).unwrap();
            let mut runs = Vec::new();
            for threads in [1, 2, 4] {
                let mut phase = start.clone();
                let mut engine = ForceEngine::new(p, bx, threads).unwrap();
                engine.compute(&mut phase).unwrap();
                let mut energies = Vec::new();
                for _ in 0..20 {
                    energies.push(step(&mut phase, &mut engine, &Thermostat::rescale(1.0).unwrap()).unwrap().energies);
                }
                runs.push((phase.positions, phase.velocities, energies));
            }
            assert!(runs.windows(2).all(|w| w[0] == w[1]), "{kind} {cutoff}");
        }
    }
}
