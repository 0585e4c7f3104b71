//! Discrete solutions and the knobs of the iteration.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::gas::{density, ellipticity_margin};
use crate::geometry::{ReflectionConfiguration, ShockCurve, SquareMap};
use crate::solver::bvp::Cutoff;
use crate::Vec2;

/// Controls of the free-boundary iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IterationParams {
    /// Width of the cutoff band next to the sonic arc, as a fraction of `c2`.
    pub cutoff_fraction: f64,
    /// Under-relaxation of the shock update, in `(0, 1]`.
    pub relax: f64,
    /// Stop when the largest shock displacement falls below this.
    pub tol_fixed_point: f64,
    pub max_outer: usize,
    /// Scaled residual at which the inner Newton iteration stops.
    pub newton_tol: f64,
    pub max_newton: usize,
    /// A posteriori bound on the jump conditions at shock nodes.
    pub tol_shock: f64,
    /// Sonic margin separating the near-sonic and away-from-sonic regimes.
    pub sigma: f64,
}

impl Default for IterationParams {
    fn default() -> Self {
        Self {
            cutoff_fraction: 0.1,
            relax: 0.55,
            tol_fixed_point: 1e-9,
            max_outer: 200,
            newton_tol: 1e-10,
            max_newton: 30,
            tol_shock: 1e-7,
            sigma: 0.1,
        }
    }
}

impl IterationParams {
    pub fn validate(&self) -> Result<()> {
        use crate::error::Error::InvalidParameter;
        if !(self.relax > 0.0 && self.relax <= 1.0) {
            return Err(InvalidParameter(format!("relax must lie in (0, 1], got {}", self.relax)));
        }
        if !(self.cutoff_fraction > 0.0 && self.cutoff_fraction < 1.0) {
            return Err(InvalidParameter(format!("cutoff fraction must lie in (0, 1), got {}", self.cutoff_fraction)));
        }
        if !(self.sigma > 0.0 && self.sigma < 1.0) {
            return Err(InvalidParameter(format!("sigma must lie in (0, 1), got {}", self.sigma)));
        }
        for (name, v) in [("tol_fixed_point", self.tol_fixed_point), ("newton_tol", self.newton_tol), ("tol_shock", self.tol_shock)] {
            if !(v > 0.0) {
                return Err(InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if self.max_outer == 0 || self.max_newton == 0 {
            return Err(InvalidParameter("iteration limits must be positive".into()));
        }
        Ok(())
    }
}

/// One outer iteration of the free-boundary loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualRecord {
    pub outer: usize,
    pub shock_movement: f64,
    pub interior_residual: f64,
}

/// Run information carried alongside a field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveMeta {
    pub n1: usize,
    pub n2: usize,
    /// Absolute width of the cutoff band; zero when the cutoff is off.
    pub cutoff_width: f64,
    pub iteration: IterationParams,
    pub converged: bool,
    /// Largest `|phi - phi1|` on the shock after convergence.
    pub potential_jump: f64,
    /// Largest mass-flux jump on the shock after convergence.
    pub mass_jump: f64,
    /// Largest Mach number outside the cutoff band.
    pub worst_mach: f64,
    /// Whether the shock movement decreased monotonically after the third
    /// outer iteration; runs where it did not are flagged.
    pub monotone_after_three: bool,
}

/// A discrete pseudo-potential on the grid of the elliptic region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionField {
    pub config: ReflectionConfiguration,
    pub shock: ShockCurve,
    pub mesh: SquareMap,
    /// Values of `phi` at the grid nodes, indexed like the mesh.
    pub phi: Vec<f64>,
    pub theta_w: f64,
    pub residual_history: Vec<ResidualRecord>,
    pub meta: SolveMeta,
}

impl SolutionField {
    /// The cutoff used when the field was computed, if any.
    pub fn cutoff(&self) -> Option<Cutoff> {
        (self.meta.cutoff_width > 0.0).then_some(Cutoff {
            center: self.config.sonic_center,
            radius: self.config.sonic_radius,
            width: self.meta.cutoff_width,
        })
    }

    /// Gradient at a node; where the grid is singular (the collapsed sonic
    /// side) the state-(2) gradient is used, which the boundary data enforce there.
    pub fn grad(&self, i: usize, j: usize) -> Vec2 {
        let m = &self.mesh;
        m.node_gradient(&self.phi, i, j).unwrap_or_else(|| self.config.state2.grad(m.node(i, j)))
    }

    /// All nodal gradients, indexed like the mesh.
    pub fn gradients(&self) -> Vec<Vec2> {
        let m = &self.mesh;
        (0..m.n1).flat_map(|i| (0..m.n2).map(move |j| (i, j))).map(|(i, j)| self.grad(i, j)).collect()
    }

    pub fn density_at(&self, i: usize, j: usize) -> Result<f64> {
        let g = self.grad(i, j);
        density(g.norm_squared(), self.phi[self.mesh.idx(i, j)], &self.config.params)
    }

    pub fn margin_at(&self, i: usize, j: usize) -> Result<f64> {
        ellipticity_margin(self.grad(i, j), self.phi[self.mesh.idx(i, j)], &self.config.params)
    }

    pub fn is_flat_wall(&self) -> bool {
        self.config.is_flat_wall()
    }
}
