use std::process::Command;
use std::ptr;

use shockrefl_ffi::*;

#[test]
fn incident_state_matches_library() {
    let mut r = SrIncident::default();
    let st = unsafe { sr_incident_state(1.0, 2.0, 2.0, &mut r) };
    assert_eq!(st, SrStatus::Ok);

    let inc = shockrefl::shock::incident_state(&shockrefl::gas::GasParams::new(1.0, 2.0, 2.0).unwrap()).unwrap();
    assert_eq!(r.u1, inc.u1);
    assert_eq!(r.xi1_0, inc.xi1_0);
}

#[test]
fn null_out_pointer_is_reported() {
    assert_eq!(unsafe { sr_incident_state(1.0, 2.0, 2.0, ptr::null_mut()) }, SrStatus::NullPointer);
    assert_eq!(unsafe { sr_angles(1.0, 2.0, 2.0, ptr::null_mut()) }, SrStatus::NullPointer);
    assert_eq!(unsafe { sr_solve(1.0, 2.0, 2.0, 90.0, 17, 1.0, ptr::null_mut()) }, SrStatus::NullPointer);
}

#[test]
fn invalid_parameters_map_to_invalid_input() {
    let mut r = SrIncident::default();
    assert_eq!(unsafe { sr_incident_state(2.0, 1.0, 2.0, &mut r) }, SrStatus::InvalidInput);
    assert_eq!(unsafe { sr_incident_state(1.0, 2.0, 0.5, &mut r) }, SrStatus::InvalidInput);
}

#[test]
fn detached_angle_is_reported() {
    let mut r = SrState2::default();
    assert_eq!(unsafe { sr_state2_solve(1.0, 2.0, 2.0, 30.0, &mut r) }, SrStatus::Detached);
    assert_eq!(unsafe { sr_state2_solve(1.0, 2.0, 2.0, 80.0, &mut r) }, SrStatus::Ok);
    assert_eq!(r.has_strong, 1);
    assert!(r.weak.rho < r.strong.rho);
}

#[test]
fn angles_are_ordered() {
    let mut a = SrAngles::default();
    assert_eq!(unsafe { sr_angles(1.0, 2.0, 2.0, &mut a) }, SrStatus::Ok);
    assert!(a.theta_d < a.theta_s && a.theta_s < 90.0);
}

#[test]
fn solve_handle_round_trip() {
    let mut h: *mut SrSolution = ptr::null_mut();
    let st = unsafe { sr_solve(1.0, 2.0, 2.0, 89.0, 17, 1.0, &mut h) };
    assert_eq!(st, SrStatus::Ok);
    assert!(!h.is_null());
    let (mut n1, mut n2) = (0usize, 0usize);
    assert_eq!(unsafe { sr_solution_dims(h, &mut n1, &mut n2) }, SrStatus::Ok);
    assert_eq!((n1, n2), (17, 17));
    let (mut x, mut y, mut phi) = (0.0, 0.0, 0.0);
    assert_eq!(unsafe { sr_solution_node(h, 0, 0, &mut x, &mut y, &mut phi) }, SrStatus::Ok);
    assert!(x.is_finite() && y.is_finite() && phi.is_finite());
    assert_eq!(unsafe { sr_solution_node(h, 17, 0, &mut x, &mut y, &mut phi) }, SrStatus::IndexOutOfRange);
    let (mut theta, mut verdict) = (0.0, -1);
    assert_eq!(unsafe { sr_solution_summary(h, &mut theta, &mut verdict) }, SrStatus::Ok);
    assert!((theta - 89.0).abs() < 1e-12);
    assert_eq!(verdict, 1);
    unsafe { sr_solution_free(h) };
    unsafe { sr_solution_free(ptr::null_mut()) };
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/shockrefl.h");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        format!(
            "#include \"{header}\"\nint main(void) {{ SrAngles a; SrSolution *h = 0; (void)h; \
             return sr_angles(1.0, 2.0, 2.0, &a) == SR_STATUS_OK ? 0 : 1; }}\n"
        ),
    )
    .unwrap();
    let status = match Command::new("cc").args(["-fsyntax-only", "-Wall", "-Werror"]).arg(&src).status() {
        Ok(s) => s,
        Err(_) => {
            eprintln!("no C compiler available; skipping header check");
            return;
        }
    };
    assert!(status.success());
}
