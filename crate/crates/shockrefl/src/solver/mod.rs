//! Free-boundary solver for the elliptic region behind the reflected shock.
//!
//! One outer iteration solves the boundary value problem with the shock held
//! fixed and then moves every shock node towards the zero of `phi - phi1`.
//! The outer loop stops when the largest displacement is below
//! `tol_fixed_point`. Solutions for a range of wedge angles are obtained by
//! continuation from the flat wall, where the solution is explicit.

pub mod bvp;
pub mod field;
pub mod linear;

use crate::error::{Error, Result};
use crate::gas::GasParams;
use crate::geometry::{build_configuration, c1_family_distance, ReflectionConfiguration, ShockCurve, SquareMap};
use crate::shock::{is_flat_wall, state2_solve, Regime};
use crate::Vec2;

pub use bvp::{BvpBoundary, BvpProblem, BvpReport, Cutoff};
pub use field::{IterationParams, ResidualRecord, SolutionField, SolveMeta};
pub use linear::SparseLuCache;

/// Direction along which shock nodes are moved by the update.
const UPDATE_DIRECTION: Vec2 = Vec2::new(-1.0, 0.0);

/// Cutoff for a configuration, or `None` away from the sonic regime.
pub fn cutoff_for(config: &ReflectionConfiguration, iter: &IterationParams) -> Option<Cutoff> {
    (config.regime != Regime::SubsonicAwayFromSonic).then_some(Cutoff {
        center: config.sonic_center,
        radius: config.sonic_radius,
        width: iter.cutoff_fraction * config.sonic_radius,
    })
}

/// Result of one boundary value solve.
#[derive(Debug, Clone)]
pub struct BvpSolution {
    pub mesh: SquareMap,
    pub phi: Vec<f64>,
    pub report: BvpReport,
}

/// Solves the fixed-shock problem on a fresh grid.
///
/// `phi_init` is a nodal initial guess on an `n1 x n2` grid; `None` starts from
/// state (2).
pub fn solve_bvp(
    config: &ReflectionConfiguration,
    shock: &ShockCurve,
    iter: &IterationParams,
    n1: usize,
    n2: usize,
    phi_init: Option<&[f64]>,
) -> Result<BvpSolution> {
    let mesh = SquareMap::build(config, &shock.points, n1, n2)?;
    let psi0: Vec<f64> = match phi_init {
        Some(p) if p.len() == mesh.len() => {
            p.iter().zip(&mesh.nodes).map(|(v, x)| v - config.state2.phi(*x)).collect()
        }
        Some(p) => {
            return Err(Error::InvalidParameter(format!(
                "initial field has {} values for a grid of {}",
                p.len(),
                mesh.len()
            )))
        }
        None => vec![0.0; mesh.len()],
    };
    let mut lu = SparseLuCache::new();
    let (psi, report) = solve_on_mesh(config, &mesh, iter, &psi0, &mut lu)?;
    let phi = psi.iter().zip(&mesh.nodes).map(|(p, x)| p + config.state2.phi(*x)).collect();
    Ok(BvpSolution { mesh, phi, report })
}

fn solve_on_mesh(
    config: &ReflectionConfiguration,
    mesh: &SquareMap,
    iter: &IterationParams,
    psi0: &[f64],
    lu: &mut SparseLuCache,
) -> Result<(Vec<f64>, BvpReport)> {
    let problem = BvpProblem {
        mesh,
        gas: &config.params,
        reference: config.state2,
        cutoff: cutoff_for(config, iter),
        boundary: BvpBoundary::Reflection { upstream: config.state1 },
        source: None,
    };
    let (psi, report) = problem.solve(psi0, iter.newton_tol, iter.max_newton, lu)?;
    if report.worst_mach >= 1.0 {
        let (mach, at) = problem.worst_mach_location(&psi)?;
        return Err(Error::EllipticityLost { mach, x: at.x, y: at.y });
    }
    Ok((psi, report))
}

/// Moves every shock node along the update direction to the linear zero of
/// `phi - phi1`, under-relaxed; returns the new curve and the largest
/// unrelaxed displacement.
pub fn update_shock(
    config: &ReflectionConfiguration,
    mesh: &SquareMap,
    phi: &[f64],
    shock: &ShockCurve,
    relax: f64,
) -> Result<(ShockCurve, f64)> {
    let diff: Vec<f64> = phi.iter().zip(&mesh.nodes).map(|(p, x)| p - config.state1.phi(*x)).collect();
    let mut points = mesh.shock_nodes();
    let mut movement: f64 = 0.0;
    for (j, point) in points.iter_mut().enumerate().skip(1) {
        let g = mesh
            .node_gradient(&diff, 0, j)
            .ok_or_else(|| Error::GraphPropertyLost(format!("singular grid at shock node {j}")))?;
        let slope = g.dot(&UPDATE_DIRECTION);
        if !(slope.abs() > 1e-12) {
            return Err(Error::GraphPropertyLost(format!("phi - phi1 is stationary along the update at node {j}")));
        }
        // A difference at the rounding level of phi itself means the node is
        // already on the zero level set.
        let id = mesh.idx(0, j);
        let resolution = 4.0 * f64::EPSILON * phi[id].abs().max(config.state1.phi(mesh.nodes[id]).abs());
        let delta = if diff[id].abs() <= resolution { 0.0 } else { -diff[id] / slope };
        movement = movement.max(delta.abs());
        *point += relax * delta * UPDATE_DIRECTION;
    }
    points[0] = config.p1;
    let last = points.len() - 1;
    points[last].y = 0.0;
    config.check_foot(points[last])?;
    let curve = ShockCurve::new(points, shock.direction_e);
    check_tangent_bounds(&curve)?;
    Ok((curve, movement))
}

/// Graph property and endpoint slope bounds of a shock in its own direction.
fn check_tangent_bounds(curve: &ShockCurve) -> Result<()> {
    let g = curve.samples()?;
    if !g.is_graph() {
        return Err(Error::GraphPropertyLost("abscissae along the shock are not increasing".into()));
    }
    let d = g.first_derivative();
    let (hi, lo) = (d[0], d[d.len() - 1]);
    let slack = 0.05 * (hi - lo).abs().max(1.0);
    if let Some(k) = d.iter().position(|&v| v > hi + slack || v < lo - slack) {
        return Err(Error::GraphPropertyLost(format!(
            "slope {:.4} at sample {k} leaves the endpoint range [{lo:.4}, {hi:.4}]",
            d[k]
        )));
    }
    Ok(())
}

/// Straight shock for the flat wall together with its configuration.
fn flat_wall_start(params: &GasParams, iter: &IterationParams) -> Result<(ReflectionConfiguration, ShockCurve)> {
    let theta = std::f64::consts::FRAC_PI_2;
    let pair = state2_solve(params, theta)?;
    let config = build_configuration(params, theta, &pair, iter.sigma)?;
    let foot = Vec2::new(config.p1.x, 0.0);
    let shock = ShockCurve::new(vec![config.p1, foot], config.cone.sample(0.5));
    Ok((config, shock))
}

/// The explicit flat-wall solution: a straight vertical shock with state (2)
/// at rest behind it, sampled on an `n1 x n2` grid.
pub fn normal_reflection(params: &GasParams, n1: usize, n2: usize, iter: &IterationParams) -> Result<SolutionField> {
    let (config, straight) = flat_wall_start(params, iter)?;
    let mesh = SquareMap::build(&config, &straight.points, n1, n2)?;
    let phi: Vec<f64> = mesh.nodes.iter().map(|x| config.state2.phi(*x)).collect();
    let shock = ShockCurve::new(mesh.shock_nodes(), straight.direction_e);
    let mut sol = SolutionField {
        config,
        shock,
        mesh,
        phi,
        theta_w: config.theta_w,
        residual_history: Vec::new(),
        meta: SolveMeta {
            n1,
            n2,
            cutoff_width: cutoff_for(&config, iter).map_or(0.0, |c| c.width),
            iteration: *iter,
            converged: true,
            potential_jump: 0.0,
            mass_jump: 0.0,
            worst_mach: 0.0,
            monotone_after_three: true,
        },
    };
    fill_shock_diagnostics(&mut sol);
    Ok(sol)
}

/// Largest potential and mass jumps at the shock nodes, and the largest nodal
/// Mach number outside the cutoff band.
fn fill_shock_diagnostics(sol: &mut SolutionField) {
    let m = &sol.mesh;
    let s1 = sol.config.state1;
    let (mut pj, mut mj) = (0.0f64, 0.0f64);
    for j in 1..m.n2 {
        let x = m.node(0, j);
        let phi = sol.phi[m.idx(0, j)];
        pj = pj.max((phi - s1.phi(x)).abs());
        // The gradient the shock rows are discretized with, so that the
        // jump measures how well the discrete condition holds.
        // The stencil acts on the deviation from state (2) only.
        let s2 = sol.config.state2;
        let p: Vec2 = BvpProblem::shock_stencil(m, j)
            .iter()
            .map(|&(id, g)| g * (sol.phi[id] - s2.phi(m.nodes[id])))
            .sum::<Vec2>()
            + s2.grad(x);
        let p1 = s1.grad(x);
        let d = p1 - p;
        if d.norm() > 0.0 {
            let nu = d / d.norm();
            let rho = crate::gas::density(p.norm_squared(), phi, &sol.config.params).unwrap_or(f64::NAN);
            let jump = (rho * p - s1.rho * p1).dot(&nu);
            mj = if jump.is_nan() { f64::NAN } else { mj.max(jump.abs()) };
        }
    }
    let cutoff = sol.cutoff();
    let mut worst: f64 = 0.0;
    for i in 0..m.n1 {
        for j in 0..m.n2 {
            let x = m.node(i, j);
            if cutoff.is_some_and(|c| c.in_band(x)) {
                continue;
            }
            if let Ok(rho) = sol.density_at(i, j) {
                let c2 = rho.powf(sol.config.params.gamma - 1.0);
                worst = worst.max((sol.grad(i, j).norm_squared() / c2).sqrt());
            }
        }
    }
    sol.meta.potential_jump = pj;
    sol.meta.mass_jump = mj;
    sol.meta.worst_mach = worst;
}

/// Similarity of the plane fixing `anchor` and sending `from` to `to`.
fn similarity(points: &[Vec2], from: Vec2, to: Vec2, anchor: Vec2) -> Vec<Vec2> {
    let a = from - anchor;
    let b = to - anchor;
    let den = a.norm_squared();
    // complex ratio b / a
    let (mr, mi) = ((b.x * a.x + b.y * a.y) / den, (b.y * a.x - b.x * a.y) / den);
    points
        .iter()
        .map(|p| {
            let d = p - anchor;
            anchor + Vec2::new(mr * d.x - mi * d.y, mr * d.y + mi * d.x)
        })
        .collect()
}

/// Bilinear resampling of a nodal field between grids of different sizes,
/// in index space.
fn resample_index_field(values: &[f64], n1: usize, n2: usize, m1: usize, m2: usize) -> Vec<f64> {
    if n1 == m1 && n2 == m2 {
        return values.to_vec();
    }
    let split = |s: f64, n: usize| {
        let x = s * (n - 1) as f64;
        let k = (x.floor() as usize).min(n - 2);
        (k, x - k as f64)
    };
    let mut out = Vec::with_capacity(m1 * m2);
    for i in 0..m1 {
        for j in 0..m2 {
            let (a, fa) = split(i as f64 / (m1 - 1) as f64, n1);
            let (b, fb) = split(j as f64 / (m2 - 1) as f64, n2);
            let v = |ii: usize, jj: usize| values[ii * n2 + jj];
            out.push(
                (1.0 - fa) * (1.0 - fb) * v(a, b)
                    + fa * (1.0 - fb) * v(a + 1, b)
                    + (1.0 - fa) * fb * v(a, b + 1)
                    + fa * fb * v(a + 1, b + 1),
            );
        }
    }
    out
}

/// Runs the free-boundary iteration at `theta_w` from a nearby solution.
///
/// The initial shock is the previous one carried by the similarity that keeps
/// its foot and moves its upper endpoint onto the new `P1`; the initial
/// `phi - phi2` is reused node by node.
pub fn fixed_point_solve(
    params: &GasParams,
    theta_w: f64,
    iter: &IterationParams,
    init: &SolutionField,
    n1: usize,
    n2: usize,
) -> Result<SolutionField> {
    iter.validate()?;
    let pair = state2_solve(params, theta_w)?;
    let config = build_configuration(params, theta_w, &pair, iter.sigma)?;
    let old = &init.shock;
    let direction = config.cone.sample(0.5);
    let mut shock = ShockCurve::new(similarity(&old.points, old.p1(), config.p1, old.p2()), direction);
    let old_psi: Vec<f64> =
        init.phi.iter().zip(&init.mesh.nodes).map(|(p, x)| p - init.config.state2.phi(*x)).collect();
    let mut psi = resample_index_field(&old_psi, init.mesh.n1, init.mesh.n2, n1, n2);

    let mut lu = SparseLuCache::new();
    let mut history = Vec::new();
    let mut converged = false;
    for outer in 0..iter.max_outer {
        let mesh = SquareMap::build(&config, &shock.points, n1, n2)?;
        let (p, report) = solve_on_mesh(&config, &mesh, iter, &psi, &mut lu)?;
        psi = p;
        let phi: Vec<f64> = psi.iter().zip(&mesh.nodes).map(|(p, x)| p + config.state2.phi(*x)).collect();
        let (next, movement) = update_shock(&config, &mesh, &phi, &shock, iter.relax)?;
        history.push(ResidualRecord { outer, shock_movement: movement, interior_residual: report.interior_residual });
        log::debug!(
            "theta {:.4} deg, outer {outer}: shock movement {movement:.3e}, residual {:.3e}",
            theta_w.to_degrees(),
            report.interior_residual
        );
        shock = next;
        if movement < iter.tol_fixed_point {
            converged = true;
            break;
        }
    }
    if !converged {
        let last = history.last().map_or(f64::NAN, |r| r.shock_movement);
        return Err(Error::NoConvergence(format!(
            "shock still moving by {last:.3e} after {} outer iterations at {:.4} deg",
            iter.max_outer,
            theta_w.to_degrees()
        )));
    }
    let mesh = SquareMap::build(&config, &shock.points, n1, n2)?;
    let (psi, report) = solve_on_mesh(&config, &mesh, iter, &psi, &mut lu)?;
    let phi: Vec<f64> = psi.iter().zip(&mesh.nodes).map(|(p, x)| p + config.state2.phi(*x)).collect();
    let monotone = history.windows(2).skip(2).all(|w| w[1].shock_movement <= w[0].shock_movement);
    let shock = ShockCurve::new(mesh.shock_nodes(), direction);
    let mut sol = SolutionField {
        config,
        shock,
        mesh,
        phi,
        theta_w,
        residual_history: history,
        meta: SolveMeta {
            n1,
            n2,
            cutoff_width: cutoff_for(&config, iter).map_or(0.0, |c| c.width),
            iteration: *iter,
            converged: true,
            potential_jump: 0.0,
            mass_jump: 0.0,
            worst_mach: report.worst_mach,
            monotone_after_three: monotone,
        },
    };
    fill_shock_diagnostics(&mut sol);
    if !(sol.meta.potential_jump < iter.tol_shock && sol.meta.mass_jump < 10.0 * iter.tol_shock) {
        return Err(Error::NoConvergence(format!(
            "jump conditions not met at the fixed point (potential {:.3e}, mass {:.3e})",
            sol.meta.potential_jump, sol.meta.mass_jump
        )));
    }
    Ok(sol)
}

/// Why a continuation sweep stopped.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SweepStatus {
    Completed,
    Detached { theta_deg: f64 },
    Attached { theta_deg: f64, foot: f64 },
    NoConvergence { theta_deg: f64, message: String },
}

impl SweepStatus {
    pub fn label(&self) -> &'static str {
        match self {
            SweepStatus::Completed => "completed",
            SweepStatus::Detached { .. } => "detached_wedge_angle",
            SweepStatus::Attached { .. } => "attached_shock_detected",
            SweepStatus::NoConvergence { .. } => "no_convergence",
        }
    }
}

/// A family of solutions along a descending angle grid.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub members: Vec<SolutionField>,
    /// `distances[k]` is the distance between members `k` and `k + 1`.
    pub distances: Vec<f64>,
    pub status: SweepStatus,
}

/// Number of times a failing angle step is halved before the sweep gives up.
pub const MAX_HALVINGS: usize = 6;

/// Marches down the angle grid from the flat wall, warm-starting each solve
/// from the previous member. A failing step is retried through intermediate
/// angles, halving the step up to [`MAX_HALVINGS`] times; intermediate
/// solutions are used only as warm starts.
pub fn continuation_sweep(
    params: &GasParams,
    theta_grid: &[f64],
    iter: &IterationParams,
    n1: usize,
    n2: usize,
) -> Result<SweepResult> {
    iter.validate()?;
    let Some(&first) = theta_grid.first() else {
        return Err(Error::InvalidParameter("empty angle grid".into()));
    };
    if !is_flat_wall(first) {
        return Err(Error::InvalidParameter(format!(
            "angle grid must start at 90 deg, got {:.6} deg",
            first.to_degrees()
        )));
    }
    if theta_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter("angle grid must be strictly descending".into()));
    }
    let mut members = vec![normal_reflection(params, n1, n2, iter)?];
    let mut distances = Vec::new();
    let mut status = SweepStatus::Completed;
    let mut current = members[0].clone();
    for &target in &theta_grid[1..] {
        match advance(params, &current, target, iter, n1, n2) {
            Ok(sol) => {
                let prev = members.last().expect("family starts with the flat wall");
                distances.push(c1_family_distance(prev, &sol)?);
                current = sol.clone();
                members.push(sol);
            }
            Err(Error::DetachedWedgeAngle { theta_deg }) => {
                status = SweepStatus::Detached { theta_deg };
                break;
            }
            Err(Error::AttachedShockDetected { foot, .. }) => {
                status = SweepStatus::Attached { theta_deg: target.to_degrees(), foot };
                break;
            }
            Err(e) => {
                status = SweepStatus::NoConvergence { theta_deg: target.to_degrees(), message: e.to_string() };
                break;
            }
        }
        log::info!("converged at {:.4} deg", target.to_degrees());
    }
    Ok(SweepResult { members, distances, status })
}

/// Reaches `target` from `start`, subdividing the step on recoverable failures.
fn advance(
    params: &GasParams,
    start: &SolutionField,
    target: f64,
    iter: &IterationParams,
    n1: usize,
    n2: usize,
) -> Result<SolutionField> {
    let mut current = start.clone();
    let mut step = current.theta_w - target;
    let mut halvings = 0;
    while current.theta_w > target {
        let next = (current.theta_w - step).max(target);
        match fixed_point_solve(params, next, iter, &current, n1, n2) {
            Ok(sol) => current = sol,
            Err(e @ (Error::DetachedWedgeAngle { .. } | Error::AttachedShockDetected { .. } | Error::InvalidParameter(_))) => {
                return Err(e)
            }
            Err(e) => {
                if halvings == MAX_HALVINGS {
                    return Err(e);
                }
                halvings += 1;
                step *= 0.5;
                log::warn!("step to {:.4} deg failed ({e}); retrying with step {:.4} deg", next.to_degrees(), step.to_degrees());
            }
        }
    }
    Ok(current)
}
