//! Discrete boundary value problem for a fixed shock.
//!
//! The unknown is `psi = phi - phi_ref`, with `phi_ref` the reflected uniform
//! state. The equation `div(rho D phi) + 2 rho = 0` is discretized in
//! conservative form with vertex-centred control volumes on the quadrilateral
//! grid: each cell contributes four internal face segments (edge midpoint to
//! centroid) and four sub-volumes, with bilinear interpolation inside the cell.
//! Uniform states are reproduced exactly because both the flux and the volume
//! term are evaluated pointwise from the interpolated field.
//!
//! Boundary rows:
//! * sonic side (`t = 0`): Dirichlet `psi = 0`;
//! * wedge and symmetry sides: zero flux, which is the natural condition of the
//!   finite-volume form;
//! * shock side: the mass jump condition with the density taken on the upstream
//!   potential, `(rho p - rho1 p1) . (p1 - p) = 0`, where `p` is the discrete
//!   gradient at the node and `p1 = D phi1`. This combines both jump conditions
//!   with the potential continuity substituted into the density.
//!
//! The nonlinear system is solved by Newton's method with the analytic
//! Jacobian and a sparse direct factorization.

use crate::error::{Error, Result};
use crate::gas::{GasParams, UniformState};
use crate::geometry::mesh::SquareMap;
use crate::solver::linear::SparseLuCache;
use crate::Vec2;

/// Ellipticity cutoff near the sonic arc.
///
/// Within `width` of the arc the local `M^2 = q^2/c^2` is capped by `1 - d/radius`,
/// `d` being the depth inside the sonic circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cutoff {
    pub center: Vec2,
    pub radius: f64,
    pub width: f64,
}

impl Cutoff {
    fn depth(&self, x: Vec2) -> f64 {
        self.radius - (x - self.center).norm()
    }

    pub fn in_band(&self, x: Vec2) -> bool {
        self.depth(x) < self.width
    }
}

/// Boundary treatment of the discrete problem.
pub enum BvpBoundary<'a> {
    /// Reflection problem: Dirichlet sonic side, oblique shock side, Neumann elsewhere.
    Reflection { upstream: UniformState },
    /// Dirichlet data `phi = g(xi)` on all four sides (used for verification).
    Dirichlet(&'a dyn Fn(Vec2) -> f64),
}

/// One discrete problem on a fixed grid.
pub struct BvpProblem<'a> {
    pub mesh: &'a SquareMap,
    pub gas: &'a GasParams,
    pub reference: UniformState,
    pub cutoff: Option<Cutoff>,
    pub boundary: BvpBoundary<'a>,
    /// Right-hand side `f` of `div(rho D phi) + 2 rho = f`.
    pub source: Option<&'a dyn Fn(Vec2) -> f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RowKind {
    Flux,
    Dirichlet,
    Shock,
}

/// Residual vector and Jacobian triplets of one assembly.
pub struct Assembly {
    pub residual: Vec<f64>,
    pub pairs: Vec<(usize, usize)>,
    pub vals: Vec<f64>,
    /// Control-volume areas per node.
    pub volumes: Vec<f64>,
    /// Largest `M^2` seen outside the cutoff band, with its location.
    pub worst_mach_sq: (f64, Vec2),
}

/// Convergence report of a Newton solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BvpReport {
    pub iterations: usize,
    /// Max over flux rows of `|residual| / volume`.
    pub interior_residual: f64,
    /// Max over shock rows of the combined condition.
    pub shock_residual: f64,
    pub worst_mach: f64,
}

/// Pointwise state at a local cell coordinate.
struct PointState {
    x: Vec2,
    q: Vec2,
    rho: f64,
    drho_dphi: f64,
    drho_dq: Vec2,
    grad_n: [Vec2; 4],
    w: [f64; 4],
}

/// Corners of a cell in local order `(0,0), (1,0), (0,1), (1,1)`.
const CORNERS: [(usize, usize); 4] = [(0, 0), (1, 0), (0, 1), (1, 1)];

/// Internal faces: start, end, left corner, right corner.
type Face = ((f64, f64), (f64, f64), usize, usize);

const FACES: [Face; 4] = [
    ((0.5, 0.0), (0.5, 0.5), 0, 1),
    ((0.5, 0.5), (0.5, 1.0), 2, 3),
    ((0.0, 0.5), (0.5, 0.5), 0, 2),
    ((0.5, 0.5), (1.0, 0.5), 1, 3),
];

fn bilinear(a: f64, b: f64) -> [f64; 4] {
    [(1.0 - a) * (1.0 - b), a * (1.0 - b), (1.0 - a) * b, a * b]
}

fn lerp4(w: &[f64; 4], x: &[Vec2; 4]) -> Vec2 {
    w[0] * x[0] + w[1] * x[1] + w[2] * x[2] + w[3] * x[3]
}

fn cross(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Density with the cutoff, and its derivatives with respect to `phi` and `q`.
pub fn cutoff_density(
    gas: &GasParams,
    cutoff: Option<&Cutoff>,
    x: Vec2,
    phi: f64,
    q: Vec2,
) -> Result<(f64, f64, Vec2, bool)> {
    let gm1 = gas.gamma - 1.0;
    let a = gas.stagnation(phi);
    let q2 = q.norm_squared();
    let mut capped = None;
    if let Some(c) = cutoff {
        let d = c.depth(x);
        if d < c.width {
            let cap = 1.0 - d.max(0.0) / c.radius;
            let q2c = cap * a / (1.0 + 0.5 * gm1 * cap);
            if q2 > q2c {
                capped = Some((cap, q2c));
            }
        }
    }
    let q2e = capped.map_or(q2, |(_, q2c)| q2c);
    let bse = a - 0.5 * gm1 * q2e;
    if !(bse > 0.0) {
        return Err(Error::VacuumReached { base: bse });
    }
    let rho = bse.powf(1.0 / gm1);
    Ok(match capped {
        Some((cap, _)) => (rho, -(rho / bse) / (1.0 + 0.5 * gm1 * cap), Vec2::zeros(), true),
        None => (rho, -rho / bse, -(rho / bse) * q, false),
    })
}

impl<'a> BvpProblem<'a> {
    fn row_kinds(&self) -> Vec<RowKind> {
        let m = self.mesh;
        let mut k = vec![RowKind::Flux; m.len()];
        for i in 0..m.n1 {
            for j in 0..m.n2 {
                let id = m.idx(i, j);
                k[id] = match &self.boundary {
                    BvpBoundary::Reflection { .. } => {
                        if j == 0 {
                            RowKind::Dirichlet
                        } else if i == 0 {
                            RowKind::Shock
                        } else {
                            RowKind::Flux
                        }
                    }
                    BvpBoundary::Dirichlet(_) => {
                        if i == 0 || j == 0 || i == m.n1 - 1 || j == m.n2 - 1 {
                            RowKind::Dirichlet
                        } else {
                            RowKind::Flux
                        }
                    }
                };
            }
        }
        k
    }

    /// Prescribed `psi` at Dirichlet nodes.
    fn dirichlet_value(&self, x: Vec2) -> f64 {
        match &self.boundary {
            BvpBoundary::Reflection { .. } => 0.0,
            BvpBoundary::Dirichlet(g) => g(x) - self.reference.phi(x),
        }
    }

    fn point_state(&self, x: &[Vec2; 4], psi: &[f64; 4], a: f64, b: f64) -> Result<PointState> {
        let xa = (1.0 - b) * (x[1] - x[0]) + b * (x[3] - x[2]);
        let xb = (1.0 - a) * (x[2] - x[0]) + a * (x[3] - x[1]);
        let jac = cross(xa, xb);
        let ca = [-(1.0 - b), 1.0 - b, -b, b];
        let cb = [-(1.0 - a), -a, 1.0 - a, a];
        let mut grad_n = [Vec2::zeros(); 4];
        for k in 0..4 {
            grad_n[k] = Vec2::new(xb.y * ca[k] - xa.y * cb[k], -xb.x * ca[k] + xa.x * cb[k]) / jac;
        }
        let w = bilinear(a, b);
        let p = lerp4(&w, x);
        let mut dpsi = Vec2::zeros();
        let mut psiv = 0.0;
        for k in 0..4 {
            dpsi += grad_n[k] * psi[k];
            psiv += w[k] * psi[k];
        }
        let q = dpsi + self.reference.grad(p);
        let phi = psiv + self.reference.phi(p);
        let (rho, drho_dphi, drho_dq, _) = cutoff_density(self.gas, self.cutoff.as_ref(), p, phi, q)?;
        Ok(PointState { x: p, q, rho, drho_dphi, drho_dq, grad_n, w })
    }

    /// Residual and Jacobian for a given `psi`.
    pub fn assemble(&self, psi: &[f64]) -> Result<Assembly> {
        let m = self.mesh;
        let n = m.len();
        let kinds = self.row_kinds();
        let mut res = vec![0.0; n];
        let mut vols = vec![0.0; n];
        let mut pairs = Vec::with_capacity(48 * n);
        let mut vals = Vec::with_capacity(48 * n);
        let mut worst = (0.0f64, Vec2::zeros());
        let gm1 = self.gas.gamma - 1.0;

        for ci in 0..m.n1 - 1 {
            for cj in 0..m.n2 - 1 {
                let ids: [usize; 4] = CORNERS.map(|(a, b)| m.idx(ci + a, cj + b));
                let x: [Vec2; 4] = ids.map(|k| m.nodes[k]);
                let ps: [f64; 4] = ids.map(|k| psi[k]);
                let at = |a: f64, b: f64| lerp4(&bilinear(a, b), &x);

                for &((a0, b0), (a1, b1), l, r) in &FACES {
                    let xa = at(a0, b0);
                    let xb = at(a1, b1);
                    let dv = xb - xa;
                    let mut na = Vec2::new(dv.y, -dv.x);
                    if (x[r] - x[l]).dot(&na) < 0.0 {
                        na = -na;
                    }
                    let st = self.point_state(&x, &ps, 0.5 * (a0 + a1), 0.5 * (b0 + b1))?;
                    self.track_mach(&st, gm1, &mut worst);
                    let qn = st.q.dot(&na);
                    let flux = st.rho * qn;
                    res[ids[l]] += flux;
                    res[ids[r]] -= flux;
                    for k in 0..4 {
                        let g = st.grad_n[k];
                        let d = st.rho * g.dot(&na) + qn * (st.drho_dq.dot(&g) + st.drho_dphi * st.w[k]);
                        if kinds[ids[l]] == RowKind::Flux {
                            pairs.push((ids[l], ids[k]));
                            vals.push(d);
                        }
                        if kinds[ids[r]] == RowKind::Flux {
                            pairs.push((ids[r], ids[k]));
                            vals.push(-d);
                        }
                    }
                }

                for (k0, &(ka, kb)) in CORNERS.iter().enumerate() {
                    let (fa, fb) = (ka as f64, kb as f64);
                    let poly = [at(fa, fb), at(0.5, fb), at(0.5, 0.5), at(fa, 0.5)];
                    let area = 0.5
                        * (0..4).map(|m| cross(poly[m], poly[(m + 1) % 4])).sum::<f64>().abs();
                    vols[ids[k0]] += area;
                    let st = self.point_state(&x, &ps, 0.25 + 0.5 * fa, 0.25 + 0.5 * fb)?;
                    self.track_mach(&st, gm1, &mut worst);
                    let src = self.source.map_or(0.0, |f| f(st.x));
                    res[ids[k0]] += (2.0 * st.rho - src) * area;
                    if kinds[ids[k0]] == RowKind::Flux {
                        for k in 0..4 {
                            let g = st.grad_n[k];
                            let d = 2.0 * area * (st.drho_dq.dot(&g) + st.drho_dphi * st.w[k]);
                            pairs.push((ids[k0], ids[k]));
                            vals.push(d);
                        }
                    }
                }
            }
        }

        for i in 0..m.n1 {
            for j in 0..m.n2 {
                let id = m.idx(i, j);
                match kinds[id] {
                    RowKind::Dirichlet => {
                        res[id] = psi[id] - self.dirichlet_value(m.nodes[id]);
                        pairs.push((id, id));
                        vals.push(1.0);
                    }
                    RowKind::Shock => {
                        let BvpBoundary::Reflection { upstream } = &self.boundary else {
                            unreachable!("shock rows only exist for the reflection problem")
                        };
                        let (g, entries) = self.shock_row(psi, j, upstream)?;
                        res[id] = g;
                        for (col, v) in entries {
                            pairs.push((id, col));
                            vals.push(v);
                        }
                    }
                    RowKind::Flux => {}
                }
            }
        }
        Ok(Assembly { residual: res, pairs, vals, volumes: vols, worst_mach_sq: worst })
    }

    fn track_mach(&self, st: &PointState, gm1: f64, worst: &mut (f64, Vec2)) {
        if self.cutoff.as_ref().is_some_and(|c| c.in_band(st.x)) {
            return;
        }
        let c2 = st.rho.powf(gm1);
        let m2 = st.q.norm_squared() / c2;
        if m2 > worst.0 {
            *worst = (m2, st.x);
        }
    }

    /// Gradient stencil at shock node `(0, j)`: node index and gradient weight.
    pub fn shock_stencil(mesh: &SquareMap, j: usize) -> Vec<(usize, Vec2)> {
        let n2 = mesh.n2;
        let ws = [(0usize, -1.5), (1, 2.0), (2, -0.5)];
        let wt: Vec<(usize, f64)> = if j + 1 < n2 {
            vec![(j - 1, -0.5), (j + 1, 0.5)]
        } else {
            vec![(j, 1.5), (j - 1, -2.0), (j - 2, 0.5)]
        };
        let xs: Vec2 = ws.iter().map(|&(i, w)| mesh.node(i, j) * w).sum();
        let xt: Vec2 = wt.iter().map(|&(jj, w)| mesh.node(0, jj) * w).sum();
        let jac = cross(xs, xt);
        let mut out: Vec<(usize, Vec2)> = Vec::with_capacity(5);
        for &(i, w) in &ws {
            out.push((mesh.idx(i, j), Vec2::new(xt.y * w, -xt.x * w) / jac));
        }
        for &(jj, w) in &wt {
            let g = Vec2::new(-xs.y * w, xs.x * w) / jac;
            let id = mesh.idx(0, jj);
            if let Some(e) = out.iter_mut().find(|e| e.0 == id) {
                e.1 += g;
            } else {
                out.push((id, g));
            }
        }
        out
    }

    fn shock_row(&self, psi: &[f64], j: usize, upstream: &UniformState) -> Result<(f64, Vec<(usize, f64)>)> {
        let m = self.mesh;
        let x = m.node(0, j);
        let stencil = Self::shock_stencil(m, j);
        let dpsi: Vec2 = stencil.iter().map(|&(id, g)| g * psi[id]).sum();
        let p = dpsi + self.reference.grad(x);
        let p1 = upstream.grad(x);
        let phi1 = upstream.phi(x);
        let gm1 = self.gas.gamma - 1.0;
        let bse = self.gas.stagnation(phi1) - 0.5 * gm1 * p.norm_squared();
        if !(bse > 0.0) {
            return Err(Error::VacuumReached { base: bse });
        }
        let rho = bse.powf(1.0 / gm1);
        let d = p1 - p;
        let mflux = rho * p - upstream.rho * p1;
        let g = mflux.dot(&d);
        let dg_dp = -(rho / bse) * p * p.dot(&d) + rho * d - mflux;
        let entries = stencil.iter().map(|&(id, gw)| (id, dg_dp.dot(&gw))).collect();
        Ok((g, entries))
    }

    /// Scaled residual norms: flux rows per unit volume, shock rows as is.
    pub fn norms(&self, asm: &Assembly) -> (f64, f64, f64) {
        let kinds = self.row_kinds();
        let (mut interior, mut shock, mut dir) = (0.0f64, 0.0f64, 0.0f64);
        for (id, r) in asm.residual.iter().enumerate() {
            match kinds[id] {
                RowKind::Flux => interior = interior.max(r.abs() / asm.volumes[id].max(1e-300)),
                RowKind::Shock => shock = shock.max(r.abs()),
                RowKind::Dirichlet => dir = dir.max(r.abs()),
            }
        }
        (interior, shock, dir)
    }

    /// Newton iteration from `psi0` until every scaled residual is below `tol`.
    pub fn solve(&self, psi0: &[f64], tol: f64, max_iter: usize, lu: &mut SparseLuCache) -> Result<(Vec<f64>, BvpReport)> {
        let m = self.mesh;
        let n = m.len();
        let kinds = self.row_kinds();
        let mut psi = psi0.to_vec();
        for id in 0..n {
            if kinds[id] == RowKind::Dirichlet {
                psi[id] = self.dirichlet_value(m.nodes[id]);
            }
        }
        let mut asm = self.assemble(&psi)?;
        let norm = |a: &Assembly| {
            let (i, s, d) = self.norms(a);
            (i.max(s).max(d), i, s)
        };
        let (mut total, mut interior, mut shock) = norm(&asm);
        let mut it = 0;
        while total >= tol {
            if it >= max_iter {
                return Err(Error::NoConvergence(format!(
                    "Newton stalled after {it} iterations (residual {total:.3e})"
                )));
            }
            it += 1;
            let rhs: Vec<f64> = asm.residual.iter().map(|r| -r).collect();
            let delta = lu.solve(n, &asm.pairs, &asm.vals, &rhs)?;
            let mut lambda = 1.0;
            loop {
                let trial: Vec<f64> = psi.iter().zip(&delta).map(|(p, d)| p + lambda * d).collect();
                match self.assemble(&trial) {
                    Ok(a) => {
                        let (t, i, s) = norm(&a);
                        if t < total || lambda < 1.0 / 64.0 {
                            psi = trial;
                            asm = a;
                            total = t;
                            interior = i;
                            shock = s;
                            break;
                        }
                    }
                    Err(Error::VacuumReached { .. }) if lambda >= 1.0 / 64.0 => {}
                    Err(e) => return Err(e),
                }
                lambda *= 0.5;
            }
            log::trace!("newton {it}: residual {total:.3e} (step {lambda})");
        }
        let worst_mach = asm.worst_mach_sq.0.sqrt();
        Ok((psi, BvpReport { iterations: it, interior_residual: interior, shock_residual: shock, worst_mach }))
    }

    /// Location of the worst Mach number outside the cutoff band.
    pub fn worst_mach_location(&self, psi: &[f64]) -> Result<(f64, Vec2)> {
        let a = self.assemble(psi)?;
        Ok((a.worst_mach_sq.0.sqrt(), a.worst_mach_sq.1))
    }

    /// Outward flux through the boundary of the union of control volumes of a
    /// node block, and the volume integral of `2 rho - f` over the same union.
    ///
    /// For a converged solution of the flux rows the two sum to zero up to the
    /// solver tolerance; the face fluxes between nodes of the block cancel in
    /// pairs, which is the conservation identity of the scheme.
    pub fn block_balance(&self, psi: &[f64], i_range: std::ops::Range<usize>, j_range: std::ops::Range<usize>) -> Result<(f64, f64)> {
        let m = self.mesh;
        let inside = |id: usize| {
            let (i, j) = (id / m.n2, id % m.n2);
            i_range.contains(&i) && j_range.contains(&j)
        };
        let (mut boundary_flux, mut volume) = (0.0, 0.0);
        for ci in 0..m.n1 - 1 {
            for cj in 0..m.n2 - 1 {
                let ids: [usize; 4] = CORNERS.map(|(a, b)| m.idx(ci + a, cj + b));
                if !ids.iter().any(|&id| inside(id)) {
                    continue;
                }
                let x: [Vec2; 4] = ids.map(|k| m.nodes[k]);
                let ps: [f64; 4] = ids.map(|k| psi[k]);
                let at = |a: f64, b: f64| lerp4(&bilinear(a, b), &x);
                for &((a0, b0), (a1, b1), l, r) in &FACES {
                    let (li, ri) = (inside(ids[l]), inside(ids[r]));
                    if li == ri {
                        continue;
                    }
                    let dv = at(a1, b1) - at(a0, b0);
                    let mut na = Vec2::new(dv.y, -dv.x);
                    if (x[r] - x[l]).dot(&na) < 0.0 {
                        na = -na;
                    }
                    let st = self.point_state(&x, &ps, 0.5 * (a0 + a1), 0.5 * (b0 + b1))?;
                    let flux = st.rho * st.q.dot(&na);
                    boundary_flux += if li { flux } else { -flux };
                }
                for (k0, &(ka, kb)) in CORNERS.iter().enumerate() {
                    if !inside(ids[k0]) {
                        continue;
                    }
                    let (fa, fb) = (ka as f64, kb as f64);
                    let poly = [at(fa, fb), at(0.5, fb), at(0.5, 0.5), at(fa, 0.5)];
                    let area = 0.5
                        * (0..4).map(|m| cross(poly[m], poly[(m + 1) % 4])).sum::<f64>().abs();
                    let st = self.point_state(&x, &ps, 0.25 + 0.5 * fa, 0.25 + 0.5 * fb)?;
                    let src = self.source.map_or(0.0, |f| f(st.x));
                    volume += (2.0 * st.rho - src) * area;
                }
            }
        }
        Ok((boundary_flux, volume))
    }
}
