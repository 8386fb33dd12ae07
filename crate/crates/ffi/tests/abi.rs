use std::ffi::CStr;
use std::ptr;

use tribody_ffi::*;

fn lattice(n_side: usize, spacing: f64) -> Vec<f64> {
    let mut v = Vec::new();
    for z in 0..n_side {
        for y in 0..n_side {
            for x in 0..n_side {
                v.extend([(x as f64 + 0.5) * spacing, (y as f64 + 0.5) * spacing, (z as f64 + 0.5) * spacing]);
            }
        }
    }
    v
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(tb_last_error()) }.to_string_lossy().into_owned()
}

fn new_system(params: &TbParams, l: f64, pos: &[f64]) -> *mut TbSystem {
    let mut sys = ptr::null_mut();
    let st = unsafe { tb_system_new(params, [l; 3].as_ptr(), pos.as_ptr(), pos.len() / 3, 1, &mut sys) };
    assert_eq!(st, TbStatus::Ok, "{}", last_error());
    sys
}

#[test]
fn defaults_and_version() {
    let mut p = unsafe { std::mem::zeroed::<TbParams>() };
    assert_eq!(unsafe { tb_params_default(&mut p) }, TbStatus::Ok);
    assert_eq!(p.nu, 0.072);
    assert_eq!(p.r_c, 2.5);
    assert_eq!(p.traversal, TbTraversal::C08);
    let v = unsafe { CStr::from_ptr(tb_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn null_pointers_are_rejected() {
    assert_eq!(unsafe { tb_params_default(ptr::null_mut()) }, TbStatus::NullPointer);
    assert!(last_error().contains("null"));
    let mut out = 0.0;
    assert_eq!(unsafe { tb_system_compute_forces(ptr::null_mut(), ptr::null_mut()) }, TbStatus::NullPointer);
    assert_eq!(unsafe { tb_hitrate(ptr::null(), &mut out) }, TbStatus::NullPointer);
    assert_eq!(unsafe { tb_system_len(ptr::null()) }, 0);
    unsafe { tb_system_free(ptr::null_mut()) };
}

#[test]
fn scalar_helpers() {
    let mut out = 0.0;
    assert_eq!(unsafe { tb_mmups(1_000_000, 1, 1.0, &mut out) }, TbStatus::Ok);
    assert_eq!(out, 1.0);
    assert_eq!(unsafe { tb_mmups(10, 1, 0.0, &mut out) }, TbStatus::InvalidArgument);
    assert!(last_error().contains("wall time"));
    assert_eq!(unsafe { tb_atm_energy(1.0, 1.0, 1.0, 0.072, &mut out) }, TbStatus::Ok);
    assert!((out - 0.072 * 11.0 / 8.0).abs() < 1e-15);
    assert_eq!(unsafe { tb_atm_energy(0.0, 1.0, 1.0, 0.072, &mut out) }, TbStatus::Coincident);
}

#[test]
fn system_round_trip() {
    let mut p = unsafe { std::mem::zeroed::<TbParams>() };
    unsafe { tb_params_default(&mut p) };
    p.t_target = 1.2;
    let pos = lattice(6, 1.3);
    let sys = new_system(&p, 7.8, &pos);
    assert_eq!(unsafe { tb_system_len(sys) }, 216);

    let mut report = TbForceReport::default();
    assert_eq!(unsafe { tb_system_compute_forces(sys, &mut report) }, TbStatus::Ok);
    assert!(report.e2 < 0.0 && report.e3 > 0.0);
    assert!((report.w3 - 9.0 * report.e3).abs() <= 1e-9 * report.w3.abs());
    let mut h = 0.0;
    assert_eq!(unsafe { tb_hitrate(&report, &mut h) }, TbStatus::Ok);
    assert!(h > 0.0 && h < 100.0);

    assert_eq!(unsafe { tb_system_init_velocities(sys, 1.2, 5) }, TbStatus::Ok);
    assert_eq!(unsafe { tb_system_step(sys, 5, 1, &mut report) }, TbStatus::Ok);
    let mut v = vec![0.0; 3 * 216];
    assert_eq!(unsafe { tb_system_velocities(sys, v.as_mut_ptr(), 216) }, TbStatus::Ok);
    let ke: f64 = 0.5 * v.iter().map(|x| x * x).sum::<f64>();
    assert!((2.0 * ke / (3.0 * 216.0) - 1.2).abs() < 1e-12);
    let mut f = vec![0.0; 3 * 216];
    assert_eq!(unsafe { tb_system_forces(sys, f.as_mut_ptr(), 216) }, TbStatus::Ok);
    let net: f64 = (0..3).map(|a| f.iter().skip(a).step_by(3).sum::<f64>().abs()).fold(0.0, f64::max);
    assert!(net < 1e-9);
    let mut x = vec![0.0; 3 * 216];
    assert_eq!(unsafe { tb_system_positions(sys, x.as_mut_ptr(), 10) }, TbStatus::InvalidArgument);
    assert_eq!(unsafe { tb_system_positions(sys, x.as_mut_ptr(), 216) }, TbStatus::Ok);
    assert!(x.iter().all(|c| (0.0..7.8).contains(c)));
    assert_eq!(unsafe { tb_system_set_velocities(sys, v.as_ptr(), 215) }, TbStatus::InvalidArgument);
    assert_eq!(unsafe { tb_system_set_velocities(sys, v.as_ptr(), 216) }, TbStatus::Ok);
    unsafe { tb_system_free(sys) };
}

#[test]
fn invalid_box_reports_message() {
    let mut p = unsafe { std::mem::zeroed::<TbParams>() };
    unsafe { tb_params_default(&mut p) };
    let pos = lattice(2, 1.0);
    let mut sys = ptr::null_mut();
    let st = unsafe { tb_system_new(&p, [4.0; 3].as_ptr(), pos.as_ptr(), 8, 1, &mut sys) };
    assert_eq!(st, TbStatus::InvalidArgument);
    assert!(sys.is_null());
    assert!(!last_error().is_empty());
}

#[test]
fn coincident_particles_map_to_status() {
    let mut p = unsafe { std::mem::zeroed::<TbParams>() };
    unsafe { tb_params_default(&mut p) };
    let pos = [1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 3.0, 3.0, 3.0];
    let mut sys = ptr::null_mut();
    let st = unsafe { tb_system_new(&p, [8.0; 3].as_ptr(), pos.as_ptr(), 3, 1, &mut sys) };
    assert_eq!(st, TbStatus::Coincident, "{}", last_error());
}
