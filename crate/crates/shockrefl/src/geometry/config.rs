//! The geometric skeleton of a regular reflection configuration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas::{GasParams, UniformState};
use crate::shock::{incident_state, regime_of_mach, IncidentData, Regime, State2Pair};
use crate::Vec2;

/// Directions spanning the monotonicity cone `{a e_s1 + b e_xi2 : a, b > 0}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeDirections {
    pub e_s1: Vec2,
    pub e_xi2: Vec2,
    /// Set for the flat wall, where the two directions are opposite and the
    /// cone opens to a half plane.
    pub degenerate: bool,
}

impl ConeDirections {
    /// Counter-clockwise opening angle from `e_xi2` to `e_s1`, in `(0, 2 pi)`.
    pub fn opening(&self) -> f64 {
        let a0 = self.e_xi2.y.atan2(self.e_xi2.x);
        let a1 = self.e_s1.y.atan2(self.e_s1.x);
        (a1 - a0).rem_euclid(std::f64::consts::TAU)
    }

    /// Direction at fraction `frac` of the opening, going from `e_xi2` (0) to `e_s1` (1).
    pub fn sample(&self, frac: f64) -> Vec2 {
        let a = self.e_xi2.y.atan2(self.e_xi2.x) + frac * self.opening();
        Vec2::new(a.cos(), a.sin())
    }
}

/// Unit vector along `S1 = {phi1 = phi2}` oriented so that `e_s1 . D phi2(P0) > 0`.
pub fn cone_directions(pair: &State2Pair, inc: &IncidentData) -> Result<ConeDirections> {
    let w = &pair.weak;
    let raw = Vec2::new(w.v, inc.u1 - w.u);
    let n = raw.norm();
    if n == 0.0 {
        return Err(Error::ZeroVector("direction of the reflected shock S1"));
    }
    let mut e_s1 = -raw / n;
    if let Some(p0) = pair.p0 {
        if e_s1.dot(&w.grad(p0)) < 0.0 {
            e_s1 = -e_s1;
        }
    }
    Ok(ConeDirections { e_s1, e_xi2: Vec2::new(0.0, 1.0), degenerate: w.v == 0.0 })
}

/// Membership in the self-similar domain outside the wedge (upper half plane).
pub fn in_lambda(xi: Vec2, theta_w: f64) -> bool {
    xi.y > 0.0 && !(xi.x > 0.0 && xi.y < xi.x * theta_w.tan())
}

/// Points `P0..P4`, the sonic circle of state (2), and the far-field states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReflectionConfiguration {
    pub params: GasParams,
    pub theta_w: f64,
    pub regime: Regime,
    pub incident: IncidentData,
    pub state0: UniformState,
    pub state1: UniformState,
    pub state2: UniformState,
    pub mach_p0: f64,
    /// Reflection point; `None` for the flat wall, where it is at infinity.
    pub p0: Option<Vec2>,
    pub p1: Vec2,
    pub p2: Vec2,
    pub p3: Vec2,
    pub p4: Vec2,
    pub sonic_center: Vec2,
    pub sonic_radius: f64,
    pub cone: ConeDirections,
    pub eps_attach: f64,
}

/// Default attachment threshold as a fraction of the sonic radius.
pub const EPS_ATTACH_FRACTION: f64 = 1e-3;

impl ReflectionConfiguration {
    pub fn is_flat_wall(&self) -> bool {
        self.p0.is_none()
    }

    pub fn has_sonic_arc(&self) -> bool {
        self.regime.has_sonic_arc()
    }

    /// Distance inside the sonic circle, `c2 - |xi - O2|`.
    pub fn depth_inside_sonic_circle(&self, xi: Vec2) -> f64 {
        self.sonic_radius - (xi - self.sonic_center).norm()
    }

    /// Unit interior normal of the wedge, `(-sin, cos)`.
    pub fn wedge_normal(&self) -> Vec2 {
        Vec2::new(-self.theta_w.sin(), self.theta_w.cos())
    }

    /// Points of the sonic arc from `P1` to `P4` by angle, `frac` in `[0, 1]`.
    pub fn sonic_arc_point(&self, frac: f64) -> Vec2 {
        if !self.has_sonic_arc() {
            return self.p1;
        }
        let d1 = self.p1 - self.sonic_center;
        let d4 = self.p4 - self.sonic_center;
        let a1 = d1.y.atan2(d1.x);
        let a4 = d4.y.atan2(d4.x);
        let mut da = a4 - a1;
        while da > std::f64::consts::PI {
            da -= std::f64::consts::TAU;
        }
        while da < -std::f64::consts::PI {
            da += std::f64::consts::TAU;
        }
        let a = a1 + frac * da;
        self.sonic_center + self.sonic_radius * Vec2::new(a.cos(), a.sin())
    }

    /// Checks the attachment criterion for a shock foot on the symmetry axis.
    pub fn check_foot(&self, foot: Vec2) -> Result<()> {
        if foot.x > -self.eps_attach {
            return Err(Error::AttachedShockDetected { foot: foot.x, threshold: self.eps_attach });
        }
        Ok(())
    }
}

/// Assembles the configuration from the reflection-point solution.
///
/// `P2` is initialized where the straight extension of `S1` through `P1`
/// meets the symmetry axis; the solver replaces it by the computed shock foot.
pub fn build_configuration(
    params: &GasParams,
    theta_w: f64,
    pair: &State2Pair,
    sigma: f64,
) -> Result<ReflectionConfiguration> {
    let inc = incident_state(params)?;
    let w = pair.weak;
    let cone = cone_directions(pair, &inc)?;
    let o2 = w.velocity();
    let c2 = w.c;
    let regime = regime_of_mach(pair.mach_p0_weak, sigma);
    let p3 = Vec2::zeros();
    let wall = Vec2::new(theta_w.cos(), theta_w.sin());

    let (p1, p4) = if let Some(xb) = pair.normal_shock_xi1 {
        let h2 = c2 * c2 - xb * xb;
        if h2 <= 0.0 {
            return Err(Error::DegenerateSonicArc(0.0));
        }
        (Vec2::new(xb, h2.sqrt()), o2 + c2 * wall)
    } else {
        let p0 = pair.p0.expect("reflection point exists below the flat wall");
        if regime.has_sonic_arc() {
            let d = p0 - o2;
            let b = d.dot(&cone.e_s1);
            let cc = d.norm_squared() - c2 * c2;
            let disc = b * b - cc;
            if disc < 0.0 {
                return Err(Error::DegenerateSonicArc(f64::NAN));
            }
            (p0 + (-b - disc.sqrt()) * cone.e_s1, o2 + c2 * wall)
        } else {
            (p0, p0)
        }
    };
    if regime.has_sonic_arc() {
        let gap = (p1 - p4).norm();
        if gap < 1e-10 {
            return Err(Error::DegenerateSonicArc(gap));
        }
    }
    let eps_attach = EPS_ATTACH_FRACTION * c2;
    let p2 = if cone.e_s1.y < 0.0 {
        let hit = p1 + (-p1.y / cone.e_s1.y) * cone.e_s1;
        Vec2::new(hit.x.min(p1.x).min(-10.0 * eps_attach), 0.0)
    } else {
        Vec2::new(p1.x.min(-10.0 * eps_attach), 0.0)
    };
    Ok(ReflectionConfiguration {
        params: *params,
        theta_w,
        regime,
        incident: inc,
        state0: UniformState::rest(params),
        state1: inc.state1(),
        state2: w,
        mach_p0: pair.mach_p0_weak,
        p0: pair.p0,
        p1,
        p2,
        p3,
        p4,
        sonic_center: o2,
        sonic_radius: c2,
        cone,
        eps_attach,
    })
}
