//! Polytropic potential-flow algebra.
//!
//! Everything here is nondimensional with pressure `p(rho) = rho^gamma / gamma`,
//! so the sound speed satisfies `c^2 = rho^(gamma - 1)`. The density closure of
//! the self-similar potential flow equation is
//!
//! ```text
//! rho(|D phi|^2, phi) = (rho0^(gamma-1) - (gamma-1) (phi + |D phi|^2 / 2))^(1/(gamma-1))
//! ```
//!
//! and a uniform state is the pseudo-potential
//! `phi(xi) = -|xi|^2 / 2 + u xi1 + v xi2 + k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Vec2;

/// Largest adiabatic exponent accepted without the explicit override.
pub const GAMMA_MAX: f64 = 3.0;

/// Upstream data `(rho0, rho1, gamma)` together with the Bernoulli constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasParams {
    pub rho0: f64,
    pub rho1: f64,
    pub gamma: f64,
    /// `B0 = (rho0^(gamma-1) - 1) / (gamma - 1)`.
    pub bernoulli: f64,
}

impl GasParams {
    /// Validated constructor: `0 < rho0 < rho1` and `gamma` in `(1, 3]`.
    pub fn new(rho0: f64, rho1: f64, gamma: f64) -> Result<Self> {
        Self::build(rho0, rho1, gamma, false)
    }

    /// Same as [`GasParams::new`] but accepts any `gamma > 1`.
    pub fn new_unrestricted(rho0: f64, rho1: f64, gamma: f64) -> Result<Self> {
        Self::build(rho0, rho1, gamma, true)
    }

    fn build(rho0: f64, rho1: f64, gamma: f64, allow_any_gamma: bool) -> Result<Self> {
        if !(rho0.is_finite() && rho0 > 0.0) {
            return Err(Error::InvalidParameter(format!("rho0 must be positive, got {rho0}")));
        }
        if !rho1.is_finite() {
            return Err(Error::InvalidParameter(format!("rho1 must be finite, got {rho1}")));
        }
        if !(gamma.is_finite() && gamma > 1.0) {
            return Err(Error::InvalidParameter(format!("gamma must exceed 1, got {gamma}")));
        }
        if !allow_any_gamma && gamma > GAMMA_MAX {
            return Err(Error::InvalidParameter(format!(
                "gamma = {gamma} is outside (1, {GAMMA_MAX}]; pass the override flag to accept it"
            )));
        }
        if rho1 <= rho0 {
            return Err(Error::NoCompression { rho0, rho1 });
        }
        let bernoulli = (rho0.powf(gamma - 1.0) - 1.0) / (gamma - 1.0);
        Ok(Self { rho0, rho1, gamma, bernoulli })
    }

    /// `rho0^(gamma-1)`, the constant on the right of the Bernoulli law.
    pub fn a0(&self) -> f64 {
        self.rho0.powf(self.gamma - 1.0)
    }

    /// `rho0^(gamma-1) - (gamma-1) phi`, the quantity that bounds the speed.
    pub fn stagnation(&self, phi: f64) -> f64 {
        self.a0() - (self.gamma - 1.0) * phi
    }
}

/// Density closure. Fails with [`Error::VacuumReached`] when the base of the power is negative.
pub fn density(grad_sq: f64, phi: f64, params: &GasParams) -> Result<f64> {
    let gm1 = params.gamma - 1.0;
    let base = params.a0() - gm1 * (phi + 0.5 * grad_sq);
    if !(base >= 0.0) {
        return Err(Error::VacuumReached { base });
    }
    Ok(base.powf(1.0 / gm1))
}

/// `c = rho^((gamma-1)/2)`.
pub fn sound_speed(rho: f64, params: &GasParams) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::NonpositiveDensity(rho));
    }
    Ok(rho.powf(0.5 * (params.gamma - 1.0)))
}

/// Critical speed `c_star(phi) = sqrt(2/(gamma+1) (rho0^(gamma-1) - (gamma-1) phi))`.
pub fn critical_speed(phi: f64, params: &GasParams) -> Result<f64> {
    let a = params.stagnation(phi);
    if !(a >= 0.0) {
        return Err(Error::VacuumReached { base: a });
    }
    Ok((2.0 / (params.gamma + 1.0) * a).sqrt())
}

/// `c_star(phi) - |D phi|`; positive exactly when the equation is strictly elliptic.
pub fn ellipticity_margin(grad: Vec2, phi: f64, params: &GasParams) -> Result<f64> {
    Ok(critical_speed(phi, params)? - grad.norm())
}

/// A constant-velocity state of the potential flow.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformState {
    pub u: f64,
    pub v: f64,
    pub k: f64,
    pub rho: f64,
    pub c: f64,
}

impl UniformState {
    /// Builds the state from its velocity and potential constant; density and
    /// sound speed follow from the Bernoulli law, which is `xi`-independent here.
    pub fn new(u: f64, v: f64, k: f64, params: &GasParams) -> Result<Self> {
        let rho = density(u * u + v * v, k, params)?;
        let c = sound_speed(rho, params)?;
        Ok(Self { u, v, k, rho, c })
    }

    /// The rest state `phi = -|xi|^2/2`, i.e. state (0).
    pub fn rest(params: &GasParams) -> Self {
        let rho = params.rho0;
        Self { u: 0.0, v: 0.0, k: 0.0, rho, c: rho.powf(0.5 * (params.gamma - 1.0)) }
    }

    pub fn velocity(&self) -> Vec2 {
        Vec2::new(self.u, self.v)
    }

    pub fn phi(&self, xi: Vec2) -> f64 {
        -0.5 * xi.norm_squared() + self.u * xi.x + self.v * xi.y + self.k
    }

    pub fn grad(&self, xi: Vec2) -> Vec2 {
        Vec2::new(self.u - xi.x, self.v - xi.y)
    }
}

/// Pseudo-potential and its gradient for a uniform state at `xi`.
pub fn uniform_potential(state: &UniformState, xi: Vec2) -> (f64, Vec2) {
    (state.phi(xi), state.grad(xi))
}
