//! C interface to the shockrefl solver.
//!
//! Every function returns an [`SrStatus`] and writes results through out
//! pointers. Angles are in degrees. A solved field lives behind the opaque
//! [`SrSolution`] handle, created by [`sr_solve`] and released with
//! [`sr_solution_free`]. Panics never cross the boundary; they map to
//! [`SrStatus::Internal`].

use std::panic::{catch_unwind, AssertUnwindSafe};

use shockrefl::admissibility::full_report;
use shockrefl::cli::{exit_code, solve_at, RunConfig};
use shockrefl::gas::GasParams;
use shockrefl::shock::{angle_diagram, incident_state, state2_solve};
use shockrefl::solver::SolutionField;
use shockrefl::Error;

/// Result codes. The numeric values of the first five match the command-line
/// exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    NoConvergence = 3,
    ReportFailed = 4,
    AttachedShock = 5,
    Detached = 6,
    IndexOutOfRange = 7,
    Internal = 99,
}

fn status_of(e: &Error) -> SrStatus {
    if matches!(e, Error::DetachedWedgeAngle { .. }) {
        return SrStatus::Detached;
    }
    match exit_code(e) {
        3 => SrStatus::NoConvergence,
        5 => SrStatus::AttachedShock,
        _ => SrStatus::InvalidInput,
    }
}

fn guard<F: FnOnce() -> Result<(), SrStatus>>(f: F) -> SrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SrStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => SrStatus::Internal,
    }
}

fn gas(rho0: f64, rho1: f64, gamma: f64) -> Result<GasParams, SrStatus> {
    GasParams::new(rho0, rho1, gamma).map_err(|e| status_of(&e))
}

fn out<'a, T>(p: *mut T) -> Result<&'a mut T, SrStatus> {
    // SAFETY: the caller passes either null or a valid, writable pointer.
    unsafe { p.as_mut() }.ok_or(SrStatus::NullPointer)
}

/// Uniform state `phi = -|xi|^2/2 + u xi1 + v xi2 + k` with its density.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SrState {
    pub u: f64,
    pub v: f64,
    pub k: f64,
    pub rho: f64,
    pub c: f64,
}

impl From<shockrefl::gas::UniformState> for SrState {
    fn from(s: shockrefl::gas::UniformState) -> Self {
        Self { u: s.u, v: s.v, k: s.k, rho: s.rho, c: s.c }
    }
}

/// Incident flow behind the planar shock.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SrIncident {
    pub u1: f64,
    pub xi1_0: f64,
    pub k1: f64,
    pub c1: f64,
}

/// Weak and strong reflected states. `has_strong` is 0 at 90 degrees.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SrState2 {
    pub weak: SrState,
    pub strong: SrState,
    pub has_strong: i32,
    pub mach_p0_weak: f64,
}

/// Transition angles in degrees.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SrAngles {
    pub theta_d: f64,
    pub theta_s: f64,
    pub rho_c: f64,
    pub attachment_possible: i32,
}

/// Opaque handle to a solved and certified field.
pub struct SrSolution {
    field: SolutionField,
    verdict: bool,
}

/// # Safety
/// `result` must be null or point to writable memory for an `SrIncident`.
#[no_mangle]
pub unsafe extern "C" fn sr_incident_state(rho0: f64, rho1: f64, gamma: f64, result: *mut SrIncident) -> SrStatus {
    guard(|| {
        let r = out(result)?;
        let inc = incident_state(&gas(rho0, rho1, gamma)?).map_err(|e| status_of(&e))?;
        *r = SrIncident { u1: inc.u1, xi1_0: inc.xi1_0, k1: inc.k1, c1: inc.c1 };
        Ok(())
    })
}

/// # Safety
/// `result` must be null or point to writable memory for an `SrState2`.
#[no_mangle]
pub unsafe extern "C" fn sr_state2_solve(
    rho0: f64,
    rho1: f64,
    gamma: f64,
    theta_deg: f64,
    result: *mut SrState2,
) -> SrStatus {
    guard(|| {
        let r = out(result)?;
        let p = state2_solve(&gas(rho0, rho1, gamma)?, theta_deg.to_radians()).map_err(|e| status_of(&e))?;
        *r = SrState2 {
            weak: p.weak.into(),
            strong: p.strong.map(Into::into).unwrap_or_default(),
            has_strong: p.strong.is_some() as i32,
            mach_p0_weak: p.mach_p0_weak,
        };
        Ok(())
    })
}

/// # Safety
/// `result` must be null or point to writable memory for an `SrAngles`.
#[no_mangle]
pub unsafe extern "C" fn sr_angles(rho0: f64, rho1: f64, gamma: f64, result: *mut SrAngles) -> SrStatus {
    guard(|| {
        let r = out(result)?;
        let d = angle_diagram(&gas(rho0, rho1, gamma)?).map_err(|e| status_of(&e))?;
        *r = SrAngles {
            theta_d: d.theta_d.to_degrees(),
            theta_s: d.theta_s.to_degrees(),
            rho_c: d.rho_c,
            attachment_possible: d.attachment_possible as i32,
        };
        Ok(())
    })
}

/// Solves at `theta_deg` by continuation from 90 degrees in steps of
/// `step_deg` on an `n x n` grid, then runs the admissibility checks.
/// On success `*handle` owns a solution that must be released with
/// [`sr_solution_free`]; a failed check still yields a handle and returns
/// `SR_STATUS_REPORT_FAILED`.
///
/// # Safety
/// `handle` must be null or point to writable memory for a pointer.
#[no_mangle]
pub unsafe extern "C" fn sr_solve(
    rho0: f64,
    rho1: f64,
    gamma: f64,
    theta_deg: f64,
    n: usize,
    step_deg: f64,
    handle: *mut *mut SrSolution,
) -> SrStatus {
    let mut verdict = true;
    let st = guard(|| {
        let h = out(handle)?;
        *h = std::ptr::null_mut();
        let rc = RunConfig {
            rho0,
            rho1,
            gamma,
            theta_deg: Some(theta_deg),
            n1: n,
            n2: n,
            coarse_step_deg: step_deg,
            ..RunConfig::default()
        };
        rc.validate().map_err(|e| status_of(&e))?;
        let field = solve_at(&rc).map_err(|e| status_of(&e))?;
        verdict = full_report(&field).map_err(|e| status_of(&e))?.verdict;
        *h = Box::into_raw(Box::new(SrSolution { field, verdict }));
        Ok(())
    });
    if st == SrStatus::Ok && !verdict {
        SrStatus::ReportFailed
    } else {
        st
    }
}

/// Releases a handle from [`sr_solve`]. Null is ignored.
///
/// # Safety
/// `handle` must be null or a pointer returned by [`sr_solve`] that has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn sr_solution_free(handle: *mut SrSolution) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

fn with<'a>(handle: *const SrSolution) -> Result<&'a SrSolution, SrStatus> {
    // SAFETY: the caller passes null or a live handle from `sr_solve`.
    unsafe { handle.as_ref() }.ok_or(SrStatus::NullPointer)
}

/// Grid size `n1 x n2` of a solution.
///
/// # Safety
/// `handle` must be null or live; `n1` and `n2` null or writable.
#[no_mangle]
pub unsafe extern "C" fn sr_solution_dims(handle: *const SrSolution, n1: *mut usize, n2: *mut usize) -> SrStatus {
    guard(|| {
        let s = with(handle)?;
        *out(n1)? = s.field.mesh.n1;
        *out(n2)? = s.field.mesh.n2;
        Ok(())
    })
}

/// Node coordinates and potential at grid index `(i, j)`.
///
/// # Safety
/// `handle` must be null or live; the out pointers null or writable.
#[no_mangle]
pub unsafe extern "C" fn sr_solution_node(
    handle: *const SrSolution,
    i: usize,
    j: usize,
    xi1: *mut f64,
    xi2: *mut f64,
    phi: *mut f64,
) -> SrStatus {
    guard(|| {
        let s = with(handle)?;
        let m = &s.field.mesh;
        if i >= m.n1 || j >= m.n2 {
            return Err(SrStatus::IndexOutOfRange);
        }
        let x = m.node(i, j);
        *out(xi1)? = x.x;
        *out(xi2)? = x.y;
        *out(phi)? = s.field.phi[m.idx(i, j)];
        Ok(())
    })
}

/// Wedge angle in degrees and the admissibility verdict (1 pass, 0 fail).
///
/// # Safety
/// `handle` must be null or live; the out pointers null or writable.
#[no_mangle]
pub unsafe extern "C" fn sr_solution_summary(
    handle: *const SrSolution,
    theta_deg: *mut f64,
    verdict: *mut i32,
) -> SrStatus {
    guard(|| {
        let s = with(handle)?;
        *out(theta_deg)? = s.field.theta_w.to_degrees();
        *out(verdict)? = s.verdict as i32;
        Ok(())
    })
}
