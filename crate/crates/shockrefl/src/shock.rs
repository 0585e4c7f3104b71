//! Rankine-Hugoniot relations and the reflection-point algebra.
//!
//! The incident shock is the vertical line `xi1 = xi1_0` separating the rest
//! state (0) from state (1) with velocity `(u1, 0)`. At the reflection point
//! `P0 = (xi1_0, xi1_0 tan(theta_w))` the reflected state (2) must satisfy
//! three conditions: slip along the wedge, continuity of the potential, and
//! conservation of mass across the reflected shock `S1 = {phi1 = phi2}`.
//!
//! Slip fixes `v2 = u2 tan(theta_w)` and continuity fixes `k2`, leaving one
//! scalar equation. It is parameterized here by the density `rho2` on a
//! logarithmic scale between `rho1` and the density at which `D phi2(P0)`
//! vanishes. In that variable the normalized mass defect has a single interior
//! maximum; the weak root sits on its rising flank and the strong root on the
//! falling flank. A scan in `u2` would instead squeeze the weak root into a
//! window of width `O(cos^2 theta_w)` near a flat wall.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas::{density, sound_speed, GasParams, UniformState};
use crate::Vec2;

/// Number of intervals in the coarse root scan.
pub const SCAN_POINTS: usize = 10_000;

/// A maximum of the mass defect within this distance of zero is a double root.
pub const DOUBLE_ROOT_TOL: f64 = 1e-12;

/// Mach numbers within this distance of one are classified as sonic.
pub const SONIC_TOL: f64 = 1e-8;

/// Data of the incident shock and the state behind it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IncidentData {
    pub u1: f64,
    pub xi1_0: f64,
    pub k1: f64,
    pub c1: f64,
    pub rho1: f64,
}

impl IncidentData {
    /// State (1) as a uniform state (stored density, not recomputed).
    pub fn state1(&self) -> UniformState {
        UniformState { u: self.u1, v: 0.0, k: self.k1, rho: self.rho1, c: self.c1 }
    }
}

/// Closed-form speed of state (1) for given upstream data.
pub fn incident_speed(rho0: f64, rho1: f64, gamma: f64) -> f64 {
    let gm1 = gamma - 1.0;
    let num = 2.0 * (rho1 - rho0) * (rho1.powf(gm1) - rho0.powf(gm1));
    (num / (gm1 * (rho1 + rho0))).sqrt()
}

/// Incident shock data from the two jump conditions and the density closure.
pub fn incident_state(params: &GasParams) -> Result<IncidentData> {
    let (rho0, rho1) = (params.rho0, params.rho1);
    if rho1 <= rho0 {
        return Err(Error::NoCompression { rho0, rho1 });
    }
    let u1 = incident_speed(rho0, rho1, params.gamma);
    let xi1_0 = rho1 * u1 / (rho1 - rho0);
    let k1 = -u1 * xi1_0;
    let c1 = sound_speed(rho1, params)?;
    Ok(IncidentData { u1, xi1_0, k1, c1, rho1 })
}

/// Jumps `[rho D phi . nu]` and `[phi]` between two uniform states at a point.
///
/// Densities are recomputed from the closure, so a state whose stored data is
/// inconsistent shows up as a mass jump. A vacuum on either side yields NaN.
pub fn rh_residual(
    left: &UniformState,
    right: &UniformState,
    point: Vec2,
    normal: Vec2,
    params: &GasParams,
) -> (f64, f64) {
    let flux = |s: &UniformState| {
        let phi = s.phi(point);
        let grad = s.grad(point);
        density(grad.norm_squared(), phi, params)
            .map(|rho| rho * grad.dot(&normal))
            .unwrap_or(f64::NAN)
    };
    (flux(right) - flux(left), right.phi(point) - left.phi(point))
}

/// Entropy condition: density increases in the pseudo-flow direction.
pub fn entropy_satisfied(upstream_rho: f64, downstream_rho: f64) -> Result<bool> {
    for r in [upstream_rho, downstream_rho] {
        if !(r > 0.0) {
            return Err(Error::NonpositiveDensity(r));
        }
    }
    Ok(downstream_rho > upstream_rho)
}

/// Weak and strong reflected states at one wedge angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State2Pair {
    pub theta_w: f64,
    pub weak: UniformState,
    /// `None` only for the flat wall, where the strong density is unbounded.
    pub strong: Option<UniformState>,
    /// Reflection point; `None` for the flat wall, where it lies at infinity.
    pub p0: Option<Vec2>,
    pub mach_p0_weak: f64,
    /// Location of the flat reflected shock for the flat wall.
    pub normal_shock_xi1: Option<f64>,
}

/// Regime of the weak reflected state at the reflection point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    Supersonic,
    Sonic,
    SubsonicNearSonic,
    SubsonicAwayFromSonic,
}

impl Regime {
    /// Whether the elliptic region has a genuine sonic arc.
    pub fn has_sonic_arc(self) -> bool {
        matches!(self, Regime::Supersonic)
    }
}

/// The reduced one-variable system at a fixed wedge angle.
struct Reduced<'a> {
    params: &'a GasParams,
    inc: IncidentData,
    cos2: f64,
    tan: f64,
    p0: Vec2,
    rho_top: f64,
}

impl<'a> Reduced<'a> {
    fn new(params: &'a GasParams, theta: f64) -> Result<Self> {
        let inc = incident_state(params)?;
        let cos = theta.cos();
        let cos2 = cos * cos;
        let tan = theta.tan();
        let gm1 = params.gamma - 1.0;
        let top = params.a0() + gm1 * inc.xi1_0 * inc.xi1_0 / (2.0 * cos2);
        let rho_top = top.powf(1.0 / gm1);
        let p0 = Vec2::new(inc.xi1_0, inc.xi1_0 * tan);
        Ok(Self { params, inc, cos2, tan, p0, rho_top })
    }

    fn rho_at(&self, s: f64) -> f64 {
        self.inc.rho1 * (self.rho_top / self.inc.rho1).powf(s)
    }

    /// `(u2, v2, k2)` on the physical branch for a given density.
    fn velocity(&self, rho2: f64) -> (f64, f64, f64) {
        let gm1 = self.params.gamma - 1.0;
        let b = (rho2.powf(gm1) - self.params.a0()) / gm1;
        let x0 = self.inc.xi1_0;
        let disc = (x0 * x0 - 2.0 * b * self.cos2).max(0.0);
        let u2 = 2.0 * b * self.cos2 / (x0 + disc.sqrt());
        let v2 = u2 * self.tan;
        let k2 = -u2 * self.p0.x - v2 * self.p0.y;
        (u2, v2, k2)
    }

    /// Density and velocity along the whole continuity curve, parametrized
    /// by `w = sqrt(disc) / xi1_0` in `(-1, 1)`.
    ///
    /// `w > 0` is the branch covered by [`Reduced::rho_at`]; `w < 0` is the
    /// branch past the largest density, where `u2 > xi1_0`. For strong
    /// compressions at small `gamma - 1` the strong root lies there. Along this
    /// curve `u2 = xi1_0 (1 - w)` exactly.
    fn curve_state(&self, w: f64) -> (f64, (f64, f64, f64)) {
        let gm1 = self.params.gamma - 1.0;
        let x0 = self.inc.xi1_0;
        let b = (1.0 - w * w) * x0 * x0 / (2.0 * self.cos2);
        let rho = (self.params.a0() + gm1 * b).powf(1.0 / gm1);
        let u2 = x0 * (1.0 - w);
        let v2 = u2 * self.tan;
        (rho, (u2, v2, -u2 * self.p0.x - v2 * self.p0.y))
    }

    /// Normalized mass defect across `S1` at `P0`.
    fn defect(&self, rho2: f64) -> f64 {
        self.defect_with(rho2, self.velocity(rho2))
    }

    fn defect_with(&self, rho2: f64, (u2, v2, _): (f64, f64, f64)) -> f64 {
        let n = Vec2::new(self.inc.u1 - u2, -v2);
        let nn = n.norm();
        if nn == 0.0 {
            return f64::NAN;
        }
        let nu = n / nn;
        let d2 = Vec2::new(u2 - self.p0.x, v2 - self.p0.y);
        let d1 = Vec2::new(self.inc.u1 - self.p0.x, -self.p0.y);
        let m1 = self.inc.rho1 * d1.dot(&nu);
        (rho2 * d2.dot(&nu) - m1) / m1.abs()
    }

    /// Mass defect scaled by `|D(phi1 - phi2)|` instead of normalized by the
    /// upstream flux: same sign as [`Reduced::defect_with`] but free of the
    /// poles where the upstream normal flux vanishes.
    fn raw_defect(&self, rho2: f64, (u2, v2, _): (f64, f64, f64)) -> f64 {
        let n = Vec2::new(self.inc.u1 - u2, -v2);
        let d2 = Vec2::new(u2 - self.p0.x, v2 - self.p0.y);
        let d1 = Vec2::new(self.inc.u1 - self.p0.x, -self.p0.y);
        rho2 * d2.dot(&n) - self.inc.rho1 * d1.dot(&n)
    }

    fn f(&self, s: f64) -> f64 {
        self.defect(self.rho_at(s))
    }

    fn state(&self, rho2: f64) -> Result<UniformState> {
        let (u2, v2, k2) = self.velocity(rho2);
        UniformState::new(u2, v2, k2, self.params)
    }

    fn mach_p0(&self, st: &UniformState) -> f64 {
        st.grad(self.p0).norm() / st.c
    }
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 4.0 * f64::EPSILON * (a.abs() + b.abs()) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Result of scanning the reduced system at one angle.
struct Scan {
    s: Vec<f64>,
    f: Vec<f64>,
    s_max: f64,
    f_max: f64,
}

fn scan(red: &Reduced) -> Scan {
    let n = SCAN_POINTS;
    let s: Vec<f64> = (0..=n)
        .map(|k| (k as f64 / n as f64).clamp(1e-13, 1.0 - 1e-13))
        .collect();
    let f: Vec<f64> = s.iter().map(|&x| red.f(x)).collect();
    let mut kmax = 0;
    for k in 0..=n {
        if f[k] > f[kmax] {
            kmax = k;
        }
    }
    let a = s[kmax.saturating_sub(1)];
    let b = s[(kmax + 1).min(n)];
    let (s_max, f_max) = golden_max(|x| red.f(x), a, b);
    let (s_max, f_max) = if f_max >= f[kmax] { (s_max, f_max) } else { (s[kmax], f[kmax]) };
    Scan { s, f, s_max, f_max }
}

/// Maximum of the normalized mass defect over the physical branch.
///
/// Two reflected states exist exactly when it is non-negative.
pub fn max_mass_defect(params: &GasParams, theta_w: f64) -> Result<f64> {
    check_angle(theta_w)?;
    if is_flat_wall(theta_w) {
        return Ok(f64::INFINITY);
    }
    let red = Reduced::new(params, theta_w)?;
    Ok(scan(&red).f_max)
}

fn check_angle(theta_w: f64) -> Result<()> {
    if !(theta_w > 0.0 && theta_w <= std::f64::consts::FRAC_PI_2 + 1e-15) {
        return Err(Error::InvalidParameter(format!(
            "wedge angle {theta_w} rad is outside (0, pi/2]"
        )));
    }
    Ok(())
}

/// True when the angle is the flat wall `pi/2` up to rounding.
pub fn is_flat_wall(theta_w: f64) -> bool {
    (theta_w - std::f64::consts::FRAC_PI_2).abs() < 1e-14
}

/// The rest state behind a flat reflected shock and the shock position.
pub fn normal_reflection_state(params: &GasParams) -> Result<(UniformState, f64)> {
    let inc = incident_state(params)?;
    let gm1 = params.gamma - 1.0;
    let a0 = params.a0();
    let shock_of = |r2: f64| {
        let k2 = (a0 - r2.powf(gm1)) / gm1;
        (k2, (k2 - inc.k1) / inc.u1)
    };
    let f = |r2: f64| {
        let (_, xb) = shock_of(r2);
        r2 * (-xb) - inc.rho1 * (inc.u1 - xb)
    };
    let lo = inc.rho1;
    let mut hi = 2.0 * inc.rho1;
    let mut grow = 0;
    while f(hi) <= 0.0 {
        hi *= 2.0;
        grow += 1;
        if grow > 200 {
            return Err(Error::BracketingFailure("normal reflection density".into()));
        }
    }
    if f(lo) >= 0.0 {
        return Err(Error::BracketingFailure("normal reflection density".into()));
    }
    let r2 = bisect(f, lo, hi);
    let (k2, xb) = shock_of(r2);
    let st = UniformState::new(0.0, 0.0, k2, params)?;
    Ok((st, xb))
}

/// Curve parameter `w` of a density on the branch covered by `rho_at`.
fn w_of_rho(red: &Reduced, rho: f64) -> f64 {
    let gm1 = red.params.gamma - 1.0;
    let b = (rho.powf(gm1) - red.params.a0()) / gm1;
    let x0 = red.inc.xi1_0;
    (1.0 - 2.0 * b * red.cos2 / (x0 * x0)).max(0.0).sqrt()
}

/// Strong root bracketed by two samples of the uniform scan, refined in the
/// curve parameter where the velocity is linear. Near the top of the density
/// range the velocity depends on the density through a square root, so a
/// bisection in density leaves residuals far above rounding.
fn strong_in_bracket(red: &Reduced, s_lo: f64, s_hi: f64) -> (f64, (f64, f64, f64)) {
    let g = |w: f64| {
        let (rho, vel) = red.curve_state(w);
        red.raw_defect(rho, vel)
    };
    let (a, b) = (w_of_rho(red, red.rho_at(s_hi)), w_of_rho(red, red.rho_at(s_lo)));
    red.curve_state(bisect(g, a.min(b), a.max(b)))
}

/// Number of samples of the continuity curve searched for the strong root.
const CURVE_POINTS: usize = 20_000;

/// Strong root on the full continuity curve: the first sign change from
/// positive to negative defect when `w` decreases from 1 to -1, refined by
/// bisection. Returns the density and velocity.
fn curve_root(red: &Reduced) -> Option<(f64, (f64, f64, f64))> {
    let g = |w: f64| {
        let (rho, vel) = red.curve_state(w);
        red.raw_defect(rho, vel)
    };
    let w_at = |k: usize| 1.0 - 2.0 * k as f64 / CURVE_POINTS as f64;
    let mut prev = g(w_at(1));
    for k in 2..CURVE_POINTS {
        let v = g(w_at(k));
        if prev >= 0.0 && v < 0.0 {
            return Some(red.curve_state(bisect(g, w_at(k), w_at(k - 1))));
        }
        prev = v;
    }
    None
}

/// Solves the reflection-point system for both roots.
pub fn state2_solve(params: &GasParams, theta_w: f64) -> Result<State2Pair> {
    check_angle(theta_w)?;
    if is_flat_wall(theta_w) {
        let (st, xb) = normal_reflection_state(params)?;
        return Ok(State2Pair {
            theta_w,
            weak: st,
            strong: None,
            p0: None,
            mach_p0_weak: f64::INFINITY,
            normal_shock_xi1: Some(xb),
        });
    }
    let red = Reduced::new(params, theta_w)?;
    let sc = scan(&red);
    let theta_deg = theta_w.to_degrees();
    if sc.f_max < -DOUBLE_ROOT_TOL {
        return Err(Error::DetachedWedgeAngle { theta_deg });
    }
    let (rho_w, strong) = if sc.f_max <= DOUBLE_ROOT_TOL {
        let r = red.rho_at(sc.s_max);
        (r, (r, red.velocity(r)))
    } else {
        let changes: Vec<usize> = (0..sc.s.len() - 1)
            .filter(|&k| (sc.f[k] < 0.0) != (sc.f[k + 1] < 0.0))
            .collect();
        let g = |x: f64| red.f(x);
        let at = |lo: f64, hi: f64| red.rho_at(bisect(g, lo, hi));
        if changes.len() >= 2 {
            let (a, b) = (changes[0], changes[1]);
            (at(sc.s[a], sc.s[a + 1]), strong_in_bracket(&red, sc.s[b], sc.s[b + 1]))
        } else if let (1, Some(st)) = (changes.len(), curve_root(&red)) {
            // Close to the flat wall the strong root crowds the top of the
            // density range or lies past it.
            let a = changes[0];
            (at(sc.s[a], sc.s[a + 1]), st)
        } else {
            // Both roots fall between two samples; split at the refined maximum.
            let k = sc.s.partition_point(|&x| x < sc.s_max);
            let left = sc.s[k.saturating_sub(1)];
            let right = sc.s[k.min(sc.s.len() - 1)];
            if red.f(left) >= 0.0 || red.f(right) >= 0.0 {
                return Err(Error::RootSeparationFailure { theta_deg });
            }
            (at(left, sc.s_max), strong_in_bracket(&red, sc.s_max, right))
        }
    };
    if rho_w != strong.0 && strong.0 <= rho_w {
        return Err(Error::RootSeparationFailure { theta_deg });
    }
    let weak = red.state(rho_w)?;
    let (u, v, k) = strong.1;
    let strong = UniformState::new(u, v, k, params)?;
    let mach = red.mach_p0(&weak);
    Ok(State2Pair {
        theta_w,
        weak,
        strong: Some(strong),
        p0: Some(red.p0),
        mach_p0_weak: mach,
        normal_shock_xi1: None,
    })
}

/// Residuals of slip, potential continuity and mass conservation at `P0`.
///
/// Each residual is divided by `max(1, m)`, `m` being the magnitude of the
/// terms it balances, so the values are absolute for states of unit size and
/// relative for the very dense strong states close to the flat wall, whose
/// absolute residuals are dominated by rounding.
pub fn state2_residuals(params: &GasParams, theta_w: f64, st: &UniformState) -> Result<[f64; 3]> {
    let inc = incident_state(params)?;
    let p0 = Vec2::new(inc.xi1_0, inc.xi1_0 * theta_w.tan());
    let (sin, cos) = theta_w.sin_cos();
    let slip = (st.v * cos - st.u * sin) / (st.u * sin).abs().max((st.v * cos).abs()).max(1.0);
    let s1 = inc.state1();
    let phi_scale = |s: &UniformState| 0.5 * p0.norm_squared() + (s.u * p0.x).abs() + (s.v * p0.y).abs() + s.k.abs();
    let cont = (st.phi(p0) - s1.phi(p0)) / phi_scale(st).max(phi_scale(&s1)).max(1.0);
    let n = Vec2::new(inc.u1 - st.u, -st.v);
    let nu = n / n.norm();
    let (mass, _) = rh_residual(&s1, st, p0, nu, params);
    let flux_scale = |s: &UniformState| {
        let g = s.grad(p0);
        density(g.norm_squared(), s.phi(p0), params).map_or(f64::NAN, |r| r * g.norm())
    };
    let mass = mass / flux_scale(st).max(flux_scale(&s1)).max(1.0);
    Ok([slip, cont, mass])
}

/// Wedge angle below which the reflection-point system has no solution.
pub fn detachment_angle(params: &GasParams) -> Result<f64> {
    let lo0 = 0.01;
    let hi0 = std::f64::consts::FRAC_PI_2 - 0.01;
    let g = |t: f64| max_mass_defect(params, t);
    let (flo, fhi) = (g(lo0)?, g(hi0)?);
    if !(flo < 0.0 && fhi > 0.0) {
        return Err(Error::BracketingFailure(format!(
            "mass defect maximum does not change sign on ({lo0}, {hi0}): {flo:.3e}, {fhi:.3e}"
        )));
    }
    let (mut lo, mut hi) = (lo0, hi0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Weak-root Mach number at the reflection point.
pub fn mach_p0_weak(params: &GasParams, theta_w: f64) -> Result<f64> {
    Ok(state2_solve(params, theta_w)?.mach_p0_weak)
}

/// Wedge angle where the weak state (2) is exactly sonic at `P0`.
pub fn sonic_angle(params: &GasParams) -> Result<f64> {
    let td = detachment_angle(params)?;
    sonic_angle_from(params, td)
}

/// [`sonic_angle`] with a precomputed detachment angle.
pub fn sonic_angle_from(params: &GasParams, theta_d: f64) -> Result<f64> {
    let hi0 = std::f64::consts::FRAC_PI_2 - 0.01;
    let g = |t: f64| mach_p0_weak(params, t).map(|m| m - 1.0);
    let (flo, fhi) = (g(theta_d)?, g(hi0)?);
    if !(flo < 0.0 && fhi > 0.0) {
        return Err(Error::BracketingFailure(format!(
            "Mach number at P0 minus one does not change sign: {flo:.3e}, {fhi:.3e}"
        )));
    }
    let (mut lo, mut hi) = (theta_d, hi0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Density `rho^c` of state (1) at which `u1 = c1`.
///
/// For `gamma >= 3` state (1) is subsonic for every compression (at
/// `gamma = 3` exactly `u1 = rho1 - rho0 < c1 = rho1`), so the result is
/// `f64::INFINITY`.
pub fn critical_density(gamma: f64, rho0: f64) -> Result<f64> {
    if !(gamma > 1.0 && rho0 > 0.0) {
        return Err(Error::InvalidParameter(format!("need gamma > 1 and rho0 > 0 ({gamma}, {rho0})")));
    }
    if gamma >= 3.0 {
        return Ok(f64::INFINITY);
    }
    let g = |r1: f64| incident_speed(rho0, r1, gamma) - r1.powf(0.5 * (gamma - 1.0));
    let lo = rho0 * (1.0 + 1e-8);
    let mut hi = 2.0 * rho0;
    while g(hi) <= 0.0 {
        hi *= 2.0;
        if hi > 1e12 * rho0 {
            return Err(Error::BracketingFailure("u1 - c1 stays negative".into()));
        }
    }
    if g(lo) >= 0.0 {
        return Err(Error::BracketingFailure("u1 - c1 is not negative near rho0".into()));
    }
    Ok(bisect(g, lo, hi))
}

/// Classification by `|D phi2(P0)|` against `c2` and `(1 - sigma) c2`.
pub fn classify_regime(params: &GasParams, theta_w: f64, sigma: f64) -> Result<Regime> {
    let pair = state2_solve(params, theta_w)?;
    Ok(regime_of_mach(pair.mach_p0_weak, sigma))
}

/// Regime for a given weak-root Mach number at `P0`.
pub fn regime_of_mach(mach: f64, sigma: f64) -> Regime {
    if mach > 1.0 + SONIC_TOL {
        Regime::Supersonic
    } else if mach >= 1.0 - SONIC_TOL {
        Regime::Sonic
    } else if mach >= 1.0 - sigma {
        Regime::SubsonicNearSonic
    } else {
        Regime::SubsonicAwayFromSonic
    }
}

/// Transition angles and the attachment criterion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleDiagram {
    pub theta_d: f64,
    pub theta_s: f64,
    pub rho_c: f64,
    pub attachment_possible: bool,
}

pub fn angle_diagram(params: &GasParams) -> Result<AngleDiagram> {
    let theta_d = detachment_angle(params)?;
    let theta_s = sonic_angle_from(params, theta_d)?;
    let rho_c = critical_density(params.gamma, params.rho0)?;
    let inc = incident_state(params)?;
    Ok(AngleDiagram { theta_d, theta_s, rho_c, attachment_possible: inc.u1 > inc.c1 })
}
