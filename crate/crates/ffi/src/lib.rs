//! C interface to the tribody engine.
//!
//! A `TbSystem` owns a phase space and a force engine. Every function returns
//! a `TbStatus`; on failure `tb_last_error` gives a message valid until the
//! next failing call on the same thread. Arrays are flat `x, y, z` triples.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tribody::dynamics::{init_velocities, step, Thermostat};
use tribody::harness::mmups;
use tribody::potentials::atm_energy;
use tribody::{
    hitrate, CutoffMode, Error, Evaluation, ForceEngine, Params, PhaseSpace, SimBox, TraversalKind, TripletCounters,
    Vec3,
};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Coincident = 3,
    ZeroKinetic = 4,
    NoTraversal = 5,
    Io = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TbTraversal {
    C01 = 0,
    C18 = 1,
    C08 = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TbCutoff {
    Pair = 0,
    Product = 1,
}

/// Reduced LJ units.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct TbParams {
    pub epsilon: f64,
    pub sigma: f64,
    pub mass: f64,
    pub nu: f64,
    pub r_c: f64,
    pub dt: f64,
    pub t_target: f64,
    pub cutoff: TbCutoff,
    pub traversal: TbTraversal,
}

/// Energies, virials and triplet counts of the latest force evaluation.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct TbForceReport {
    pub e2: f64,
    pub e3: f64,
    pub w2: f64,
    pub w3: f64,
    pub triplets_traversed: u64,
    pub triplets_accepted: u64,
    pub triplet_seconds: f64,
}

/// Opaque simulation handle.
pub struct TbSystem {
    phase: PhaseSpace,
    engine: ForceEngine,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> TbStatus {
    match e {
        Error::Coincident { .. } => TbStatus::Coincident,
        Error::ZeroKinetic => TbStatus::ZeroKinetic,
        Error::NoTraversal => TbStatus::NoTraversal,
        Error::Io(_) => TbStatus::Io,
        Error::AtStep { source, .. } => status_of(source),
        _ => TbStatus::InvalidArgument,
    }
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (TbStatus, String)>) -> TbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TbStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            TbStatus::Panic
        }
    }
}

trait IntoFfi<T> {
    fn ffi(self) -> Result<T, (TbStatus, String)>;
}

impl<T> IntoFfi<T> for tribody::Result<T> {
    fn ffi(self) -> Result<T, (TbStatus, String)> {
        self.map_err(|e| (status_of(&e), e.to_string()))
    }
}

fn null(what: &str) -> (TbStatus, String) {
    (TbStatus::NullPointer, format!("{what} is null"))
}

fn to_params(p: &TbParams) -> Params {
    Params {
        epsilon: p.epsilon,
        sigma: p.sigma,
        mass: p.mass,
        nu: p.nu,
        r_c: p.r_c,
        dt: p.dt,
        t_target: p.t_target,
        cutoff: match p.cutoff {
            TbCutoff::Pair => CutoffMode::Pair,
            TbCutoff::Product => CutoffMode::Product,
        },
        traversal: match p.traversal {
            TbTraversal::C01 => TraversalKind::C01,
            TbTraversal::C18 => TraversalKind::C18,
            TbTraversal::C08 => TraversalKind::C08,
        },
    }
}

fn report_of(ev: &Evaluation) -> TbForceReport {
    TbForceReport {
        e2: ev.energies.e2,
        e3: ev.energies.e3,
        w2: ev.energies.w2,
        w3: ev.energies.w3,
        triplets_traversed: ev.counters.traversed,
        triplets_accepted: ev.counters.accepted,
        triplet_seconds: ev.triplet_seconds,
    }
}

unsafe fn read_vec3s(data: *const f64, n: usize) -> Vec<Vec3> {
    let s = std::slice::from_raw_parts(data, 3 * n);
    s.chunks_exact(3).map(|c| Vec3::new(c[0], c[1], c[2])).collect()
}

unsafe fn write_vec3s(src: &[Vec3], out: *mut f64) {
    let d = std::slice::from_raw_parts_mut(out, 3 * src.len());
    for (c, v) in d.chunks_exact_mut(3).zip(src) {
        c.copy_from_slice(&v.to_array());
    }
}

/// Fills `out` with the default parameters.
///
/// # Safety
/// `out` must be null or point to writable memory for one `TbParams`.
#[no_mangle]
pub unsafe extern "C" fn tb_params_default(out: *mut TbParams) -> TbStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let d = Params::default();
        *out = TbParams {
            epsilon: d.epsilon,
            sigma: d.sigma,
            mass: d.mass,
            nu: d.nu,
            r_c: d.r_c,
            dt: d.dt,
            t_target: d.t_target,
            cutoff: TbCutoff::Pair,
            traversal: TbTraversal::C08,
        };
        Ok(())
    })
}

/// Creates a system of `n` particles at rest and evaluates the initial forces.
///
/// # Safety
/// `box_lengths` must hold 3 values, `positions` `3 * n` values, `out` one pointer.
#[no_mangle]
pub unsafe extern "C" fn tb_system_new(
    params: *const TbParams,
    box_lengths: *const f64,
    positions: *const f64,
    n: usize,
    threads: usize,
    out: *mut *mut TbSystem,
) -> TbStatus {
    guard(|| {
        let params = params.as_ref().ok_or_else(|| null("params"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = ptr::null_mut();
        if box_lengths.is_null() {
            return Err(null("box_lengths"));
        }
        if positions.is_null() && n > 0 {
            return Err(null("positions"));
        }
        let l = std::slice::from_raw_parts(box_lengths, 3);
        let bx = SimBox::new(l[0], l[1], l[2]).ffi()?;
        let pts = if n == 0 { Vec::new() } else { read_vec3s(positions, n) };
        let mut phase = PhaseSpace::from_positions(bx, pts).ffi()?;
        let mut engine = ForceEngine::new(to_params(params), bx, threads.max(1)).ffi()?;
        engine.compute(&mut phase).ffi()?;
        *out = Box::into_raw(Box::new(TbSystem { phase, engine }));
        Ok(())
    })
}

/// # Safety
/// `sys` must come from `tb_system_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tb_system_free(sys: *mut TbSystem) {
    if !sys.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(sys))));
    }
}

/// Particle count, 0 for a null handle.
///
/// # Safety
/// `sys` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tb_system_len(sys: *const TbSystem) -> usize {
    sys.as_ref().map_or(0, |s| s.phase.len())
}

/// # Safety
/// `sys` must be a live handle and `velocities` hold `3 * n` values.
#[no_mangle]
pub unsafe extern "C" fn tb_system_set_velocities(sys: *mut TbSystem, velocities: *const f64, n: usize) -> TbStatus {
    guard(|| {
        let s = sys.as_mut().ok_or_else(|| null("sys"))?;
        if velocities.is_null() {
            return Err(null("velocities"));
        }
        if n != s.phase.len() {
            return Err((TbStatus::InvalidArgument, format!("{n} velocities for {} particles", s.phase.len())));
        }
        s.phase.velocities = read_vec3s(velocities, n);
        Ok(())
    })
}

/// Maxwell-Boltzmann velocities at `t_target` with zero net momentum.
///
/// # Safety
/// `sys` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tb_system_init_velocities(sys: *mut TbSystem, t_target: f64, seed: u64) -> TbStatus {
    guard(|| {
        let s = sys.as_mut().ok_or_else(|| null("sys"))?;
        let mass = s.engine.params().mass;
        s.phase.velocities = init_velocities(s.phase.len(), t_target, mass, seed).ffi()?;
        Ok(())
    })
}

/// Recomputes forces at the current positions.
///
/// # Safety
/// `sys` must be a live handle; `report` may be null.
#[no_mangle]
pub unsafe extern "C" fn tb_system_compute_forces(sys: *mut TbSystem, report: *mut TbForceReport) -> TbStatus {
    guard(|| {
        let s = sys.as_mut().ok_or_else(|| null("sys"))?;
        let ev = s.engine.compute(&mut s.phase).ffi()?;
        if let Some(r) = report.as_mut() {
            *r = report_of(&ev);
        }
        Ok(())
    })
}

/// Advances `steps` velocity-Verlet steps; `rescale` non-zero applies the thermostat every step.
/// `report` receives the last step's evaluation.
///
/// # Safety
/// `sys` must be a live handle; `report` may be null.
#[no_mangle]
pub unsafe extern "C" fn tb_system_step(
    sys: *mut TbSystem,
    steps: u64,
    rescale: i32,
    report: *mut TbForceReport,
) -> TbStatus {
    guard(|| {
        let s = sys.as_mut().ok_or_else(|| null("sys"))?;
        let thermostat =
            if rescale != 0 { Thermostat::rescale(s.engine.params().t_target).ffi()? } else { Thermostat::off() };
        for k in 0..steps {
            let ev = step(&mut s.phase, &mut s.engine, &thermostat).map_err(|e| e.at_step(k + 1)).ffi()?;
            if k + 1 == steps {
                if let Some(r) = report.as_mut() {
                    *r = report_of(&ev);
                }
            }
        }
        Ok(())
    })
}

unsafe fn copy_out(sys: *const TbSystem, out: *mut f64, n: usize, pick: fn(&PhaseSpace) -> &[Vec3]) -> TbStatus {
    guard(|| {
        let s = sys.as_ref().ok_or_else(|| null("sys"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let src = pick(&s.phase);
        if n < src.len() {
            return Err((TbStatus::InvalidArgument, format!("buffer holds {n} triples, need {}", src.len())));
        }
        write_vec3s(src, out);
        Ok(())
    })
}

/// Copies positions into `out`, which holds room for `capacity` triples.
///
/// # Safety
/// `out` must be writable for `3 * capacity` values.
#[no_mangle]
pub unsafe extern "C" fn tb_system_positions(sys: *const TbSystem, out: *mut f64, capacity: usize) -> TbStatus {
    copy_out(sys, out, capacity, |p| &p.positions)
}

/// # Safety
/// As `tb_system_positions`.
#[no_mangle]
pub unsafe extern "C" fn tb_system_velocities(sys: *const TbSystem, out: *mut f64, capacity: usize) -> TbStatus {
    copy_out(sys, out, capacity, |p| &p.velocities)
}

/// # Safety
/// As `tb_system_positions`.
#[no_mangle]
pub unsafe extern "C" fn tb_system_forces(sys: *const TbSystem, out: *mut f64, capacity: usize) -> TbStatus {
    copy_out(sys, out, capacity, |p| &p.forces)
}

/// Accepted over traversed triplets, in percent.
///
/// # Safety
/// `report` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tb_hitrate(report: *const TbForceReport, out: *mut f64) -> TbStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let c =
            TripletCounters { traversed: r.triplets_traversed, accepted: r.triplets_accepted, ..Default::default() };
        *out = hitrate(&c).ffi()?;
        Ok(())
    })
}

/// Million molecule updates per second.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tb_mmups(n: usize, iterations: u64, wall_seconds: f64, out: *mut f64) -> TbStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = mmups(n, iterations, wall_seconds).ffi()?;
        Ok(())
    })
}

/// Triple-dipole energy of a triangle with the given sides.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tb_atm_energy(r_ij: f64, r_ik: f64, r_jk: f64, nu: f64, out: *mut f64) -> TbStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = atm_energy(r_ij, r_ik, r_jk, nu).ffi()?;
        Ok(())
    })
}

/// Message of the last failure on this thread; empty if none.
#[no_mangle]
pub extern "C" fn tb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn tb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
