//! Certification of computed solutions.
//!
//! Every check returns a [`CheckRecord`] with the worst value it saw, where it
//! saw it and the tolerance it applied. Strict inequalities whose true margin
//! is of order one are tested strictly; inequalities that hold with equality
//! somewhere on the boundary are tested up to the grid tolerance
//! `tol = C h^1.5`, where `h` is the largest grid spacing.
//!
//! Two checks are diagnostic only and never affect the verdict: the agreement
//! between the curvature of the shock and the tangential second derivative of
//! `phi - phi1` along it, and the monotonicity of the distance from the origin
//! to the tangent lines of the shock.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::{ConeDirections, ShockCurve};
use crate::shock::rh_residual;
use crate::solver::SolutionField;
use crate::Vec2;

/// Prefactor of the grid tolerance.
pub const TOL_PREFACTOR: f64 = 10.0;
/// Required strict concavity of the shock graph on the middle of the arc.
pub const DELTA_CONV: f64 = 1e-6;
/// Nodes skipped next to each endpoint in strict pointwise checks.
pub const ENDPOINT_SKIP: usize = 2;
/// Bound on the closed-form exterior residuals.
pub const FAR_FIELD_TOL: f64 = 1e-10;
/// Fractions of the cone opening used as interior directions.
pub const CONE_FRACTIONS: [f64; 3] = [0.25, 0.5, 0.75];

/// Grid-dependent tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub h: f64,
    pub tol: f64,
    pub delta_conv: f64,
}

impl Tolerances {
    pub fn for_field(sol: &SolutionField) -> Self {
        let h = sol.mesh.max_spacing();
        Self { h, tol: TOL_PREFACTOR * h.powf(1.5), delta_conv: DELTA_CONV }
    }
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    /// The condition being certified, in words.
    pub condition: String,
    pub mandatory: bool,
    pub passed: bool,
    /// Worst value of the checked quantity (its meaning depends on the check).
    pub worst: f64,
    pub location: Option<[f64; 2]>,
    pub tolerance: f64,
    /// Further numbers worth recording.
    pub details: BTreeMap<String, f64>,
    pub note: Option<String>,
}

impl CheckRecord {
    fn new(name: &str, condition: &str, mandatory: bool, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            condition: condition.into(),
            mandatory,
            passed: true,
            worst: f64::NAN,
            location: None,
            tolerance,
            details: BTreeMap::new(),
            note: None,
        }
    }
}

/// Running extremum with its location.
#[derive(Clone, Copy)]
struct Extremum {
    value: f64,
    at: Option<Vec2>,
}

impl Extremum {
    fn min() -> Self {
        Self { value: f64::INFINITY, at: None }
    }
    fn max() -> Self {
        Self { value: f64::NEG_INFINITY, at: None }
    }
    fn push_min(&mut self, v: f64, x: Vec2) {
        if v < self.value || v.is_nan() && !self.value.is_nan() {
            *self = Self { value: v, at: Some(x) };
        }
    }
    fn push_max(&mut self, v: f64, x: Vec2) {
        if v > self.value || v.is_nan() && !self.value.is_nan() {
            *self = Self { value: v, at: Some(x) };
        }
    }
    fn loc(&self) -> Option<[f64; 2]> {
        self.at.map(|p| [p.x, p.y])
    }
}

/// Whether the row `j = 0` lies on the sonic side (arc or collapsed point).
fn sonic_row(sol: &SolutionField) -> bool {
    sol.mesh.stretched || sol.mesh.collapsed_sonic
}

/// Strict ellipticity away from the sonic side.
///
/// Outside the cutoff band the margin `c* - |D phi|` must be positive; inside
/// it, where the equation degenerates at the sonic arc, it may not fall below
/// `-tol`. Nodes on the sonic side itself are excluded.
pub fn check_ellipticity(sol: &SolutionField, tol: &Tolerances) -> CheckRecord {
    let mut rec = CheckRecord::new(
        "ellipticity",
        "c* - |D phi| > 0 away from the sonic side (>= -tol inside the cutoff band)",
        true,
        tol.tol,
    );
    let m = &sol.mesh;
    let cutoff = sol.cutoff();
    let skip_first = sonic_row(sol);
    let (mut outside, mut band) = (Extremum::min(), Extremum::min());
    for i in 0..m.n1 {
        for j in usize::from(skip_first)..m.n2 {
            let x = m.node(i, j);
            let margin = sol.margin_at(i, j).unwrap_or(f64::NAN);
            if cutoff.is_some_and(|c| c.in_band(x)) {
                band.push_min(margin, x);
            } else {
                outside.push_min(margin, x);
            }
        }
    }
    let ok_out = outside.at.is_none() || outside.value > 0.0;
    let ok_band = band.at.is_none() || band.value > -tol.tol;
    rec.passed = ok_out && ok_band;
    let worst = if !ok_out || ok_band && outside.value <= band.value + tol.tol { outside } else { band };
    rec.worst = worst.value;
    rec.location = worst.loc();
    rec.details.insert("min_margin_outside_band".into(), outside.value);
    rec.details.insert("min_margin_in_band".into(), band.value);
    rec
}

/// Unit normal of the shock at node `j`, pointing into the domain.
fn shock_normal(sol: &SolutionField, j: usize) -> Vec2 {
    let m = &sol.mesh;
    let n2 = m.n2;
    let t = if j == 0 {
        m.node(0, 1) - m.node(0, 0)
    } else if j == n2 - 1 {
        m.node(0, j) - m.node(0, j - 1)
    } else {
        m.node(0, j + 1) - m.node(0, j - 1)
    };
    let mut nu = Vec2::new(-t.y, t.x).normalize();
    if nu.dot(&(m.node(1, j) - m.node(0, j))) < 0.0 {
        nu = -nu;
    }
    nu
}

fn shock_range(n2: usize) -> std::ops::Range<usize> {
    ENDPOINT_SKIP..n2.saturating_sub(ENDPOINT_SKIP)
}

/// `d_nu phi1 > d_nu phi > 0` on the shock, `nu` pointing into the domain.
pub fn check_shock_inequalities(sol: &SolutionField, tol: &Tolerances) -> CheckRecord {
    let mut rec =
        CheckRecord::new("shock_inequalities", "d_nu phi1 > d_nu phi > 0 on the shock", true, 0.0);
    let m = &sol.mesh;
    let s1 = sol.config.state1;
    let (mut gap, mut inner, mut entropy) = (Extremum::min(), Extremum::min(), Extremum::min());
    for j in shock_range(m.n2) {
        let x = m.node(0, j);
        let nu = shock_normal(sol, j);
        let dphi = sol.grad(0, j).dot(&nu);
        let dphi1 = s1.grad(x).dot(&nu);
        gap.push_min(dphi1 - dphi, x);
        inner.push_min(dphi, x);
        entropy.push_min(sol.density_at(0, j).unwrap_or(f64::NAN) - s1.rho, x);
    }
    rec.passed = gap.value > 0.0 && inner.value > 0.0;
    let worst = if gap.value <= inner.value { gap } else { inner };
    rec.worst = worst.value;
    rec.location = worst.loc();
    rec.details.insert("min_dnu_phi1_minus_dnu_phi".into(), gap.value);
    rec.details.insert("min_dnu_phi".into(), inner.value);
    rec.details.insert("min_rho_minus_rho1".into(), entropy.value);
    rec.details.insert("grid_tolerance".into(), tol.tol);
    rec
}

/// `phi2 - tol <= phi <= phi1 + tol` at every node.
pub fn check_pinching(sol: &SolutionField, tol: &Tolerances) -> CheckRecord {
    let mut rec = CheckRecord::new("pinching", "phi2 <= phi <= phi1 in the domain", true, tol.tol);
    let mut worst = Extremum::max();
    let (mut below, mut above) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for (k, &x) in sol.mesh.nodes.iter().enumerate() {
        let lo = sol.config.state2.phi(x) - sol.phi[k];
        let hi = sol.phi[k] - sol.config.state1.phi(x);
        below = below.max(lo);
        above = above.max(hi);
        worst.push_max(lo.max(hi), x);
    }
    rec.passed = worst.value <= tol.tol;
    rec.worst = worst.value;
    rec.location = worst.loc();
    rec.details.insert("max_phi2_minus_phi".into(), below);
    rec.details.insert("max_phi_minus_phi1".into(), above);
    rec
}

/// Monotonicity of `phi1 - phi` for explicit direction sets.
///
/// `interior` directions must give `d_e (phi1 - phi) < 0` at interior nodes;
/// `boundary` directions must give `d_e (phi1 - phi) <= tol` on the shock.
pub fn check_cone_directions(
    sol: &SolutionField,
    interior: &[Vec2],
    boundary: &[Vec2],
    tol: &Tolerances,
) -> CheckRecord {
    let mut rec = CheckRecord::new(
        "cone_monotonicity",
        "d_e (phi1 - phi) < 0 inside for interior cone directions, <= 0 on the shock for e_S1 and e_xi2",
        true,
        tol.tol,
    );
    let m = &sol.mesh;
    let s1 = sol.config.state1;
    let grads = sol.gradients();
    let mut ok = true;
    let mut worst = Extremum::max();
    for (k, e) in interior.iter().enumerate() {
        let mut ext = Extremum::max();
        for i in 1..m.n1 - 1 {
            for j in 1..m.n2 - 1 {
                let x = m.node(i, j);
                ext.push_max((s1.grad(x) - grads[m.idx(i, j)]).dot(e), x);
            }
        }
        ok &= ext.value < 0.0;
        rec.details.insert(format!("interior_{k}_max"), ext.value);
        if ext.value > worst.value {
            worst = ext;
        }
    }
    for (k, e) in boundary.iter().enumerate() {
        let mut ext = Extremum::max();
        for j in shock_range(m.n2) {
            let x = m.node(0, j);
            ext.push_max((s1.grad(x) - grads[m.idx(0, j)]).dot(e), x);
        }
        ok &= ext.value <= tol.tol;
        rec.details.insert(format!("boundary_{k}_max_on_shock"), ext.value);
        if ext.value - tol.tol > worst.value {
            worst = ext;
        }
    }
    rec.passed = ok;
    rec.worst = worst.value;
    rec.location = worst.loc();
    rec
}

/// Interior directions at the standard fractions of the cone opening.
pub fn cone_samples(cone: &ConeDirections) -> Vec<Vec2> {
    CONE_FRACTIONS.iter().map(|&f| cone.sample(f)).collect()
}

/// Cone monotonicity with the standard direction set.
pub fn check_cone_monotonicity(sol: &SolutionField, tol: &Tolerances) -> CheckRecord {
    let cone = sol.config.cone;
    check_cone_directions(sol, &cone_samples(&cone), &[cone.e_s1, cone.e_xi2], tol)
}

/// `d_nu_w (phi - phi2) <= tol` with `nu_w` the interior wedge normal.
pub fn check_wedge_monotonicity(sol: &SolutionField, tol: &Tolerances) -> CheckRecord {
    let mut rec =
        CheckRecord::new("wedge_monotonicity", "d_nu_w (phi - phi2) <= 0 in the domain", true, tol.tol);
    let m = &sol.mesh;
    let nu = sol.config.wedge_normal();
    let mut worst = Extremum::max();
    for i in 0..m.n1 {
        for j in usize::from(sonic_row(sol))..m.n2 {
            let x = m.node(i, j);
            worst.push_max((sol.grad(i, j) - sol.config.state2.grad(x)).dot(&nu), x);
        }
    }
    rec.passed = worst.value <= tol.tol;
    rec.worst = worst.value;
    rec.location = worst.loc();
    rec
}

/// Graph property, endpoint slope bounds and strict convexity of the shock,
/// in each of the given directions.
///
/// With `flat` set the strict convexity requirement is replaced by flatness,
/// `|f''| < tol`, which is what a flat wall produces.
pub fn check_graph_and_convexity(
    shock: &ShockCurve,
    directions: &[Vec2],
    tol: &Tolerances,
    flat: bool,
) -> Result<CheckRecord> {
    let n = shock.points.len();
    if n < 5 {
        return Err(Error::TooFewSamples(n));
    }
    let mut rec = CheckRecord::new(
        "graph_and_convexity",
        "shock is a graph with endpoint-bounded slopes and f_e'' < 0 on the middle 80% of the arc",
        true,
        tol.tol,
    );
    let mut verdicts = Vec::new();
    let mut worst = Extremum::max();
    for (k, &e) in directions.iter().enumerate() {
        let g = shock.graph(e)?;
        let graph = g.is_graph();
        let mut ok = graph;
        let mut mid_max = f64::NEG_INFINITY;
        let mut all_max = f64::NEG_INFINITY;
        let mut all_abs = 0.0f64;
        if graph {
            let d1 = g.first_derivative();
            let (hi, lo) = (d1[0], d1[n - 1]);
            let slope_ok = d1.iter().all(|&v| v <= hi + tol.tol && v >= lo - tol.tol);
            ok &= slope_ok;
            rec.details.insert(format!("dir_{k}_slope_bounds_hold"), f64::from(u8::from(slope_ok)));
            let d2 = g.second_derivative();
            let (t0, t1) = (g.t[0], g.t[n - 1]);
            let (a, b) = (t0 + 0.1 * (t1 - t0), t1 - 0.1 * (t1 - t0));
            for idx in ENDPOINT_SKIP..n - ENDPOINT_SKIP {
                let p = shock.points[idx];
                all_max = all_max.max(d2[idx]);
                all_abs = all_abs.max(d2[idx].abs());
                if flat {
                    worst.push_max(d2[idx].abs(), p);
                } else {
                    worst.push_max(d2[idx], p);
                }
                if (a..=b).contains(&g.t[idx]) {
                    mid_max = mid_max.max(d2[idx]);
                }
            }
            ok &= if flat { all_abs < tol.tol } else { all_max <= tol.tol && mid_max < -tol.delta_conv };
        }
        rec.details.insert(format!("dir_{k}_is_graph"), f64::from(u8::from(graph)));
        rec.details.insert(format!("dir_{k}_max_f2_middle"), mid_max);
        rec.details.insert(format!("dir_{k}_max_f2"), all_max);
        verdicts.push(ok);
    }
    let agree = verdicts.windows(2).all(|w| w[0] == w[1]);
    rec.passed = agree && verdicts.iter().all(|&v| v);
    rec.worst = worst.value;
    rec.location = worst.loc();
    if flat {
        rec.note = Some("flat wall: strict convexity exempted, flatness |f''| < tol asserted instead".into());
    }
    if !agree {
        rec.note = Some("verdicts disagree across cone directions".into());
    }
    Ok(rec)
}

/// Hessian of a nodal field by repeated nodal differentiation.
fn hessians(sol: &SolutionField, f: &[f64]) -> Vec<[Vec2; 2]> {
    let m = &sol.mesh;
    let grads: Vec<Vec2> = (0..m.n1)
        .flat_map(|i| (0..m.n2).map(move |j| (i, j)))
        .map(|(i, j)| m.node_gradient(f, i, j).unwrap_or_else(Vec2::zeros))
        .collect();
    let gx: Vec<f64> = grads.iter().map(|g| g.x).collect();
    let gy: Vec<f64> = grads.iter().map(|g| g.y).collect();
    (0..m.n1)
        .flat_map(|i| (0..m.n2).map(move |j| (i, j)))
        .map(|(i, j)| {
            [
                m.node_gradient(&gx, i, j).unwrap_or_else(Vec2::zeros),
                m.node_gradient(&gy, i, j).unwrap_or_else(Vec2::zeros),
            ]
        })
        .collect()
}

/// Diagnostic: sign agreement between `(phi - phi1)_tt` on the shock and
/// `-f_e''` of the shock graph.
pub fn check_phi_tau_tau_equivalence(sol: &SolutionField, tol: &Tolerances) -> Result<CheckRecord> {
    let mut rec = CheckRecord::new(
        "phi_tau_tau_equivalence",
        "(phi - phi1)_tt > 0 on the shock exactly where f_e'' < 0",
        false,
        tol.tol,
    );
    let m = &sol.mesh;
    let diff: Vec<f64> = sol.phi.iter().zip(&m.nodes).map(|(p, x)| p - sol.config.state1.phi(*x)).collect();
    let hess = hessians(sol, &diff);
    let g = sol.shock.samples()?;
    let d2 = g.second_derivative();
    let (mut agree, mut total, mut degenerate) = (0usize, 0usize, 0usize);
    let mut first_bad = None;
    for j in shock_range(m.n2) {
        let x = m.node(0, j);
        let t = (m.node(0, j + 1) - m.node(0, j - 1)).normalize();
        let h = hess[m.idx(0, j)];
        let ptt = t.x * h[0].dot(&t) + t.y * h[1].dot(&t);
        let f2 = d2.get(j).copied().unwrap_or(f64::NAN);
        total += 1;
        if ptt.abs() < tol.tol && f2.abs() < tol.tol {
            agree += 1;
            degenerate += 1;
        } else if ptt.signum() == -f2.signum() {
            agree += 1;
        } else if first_bad.is_none() {
            first_bad = Some(x);
        }
    }
    let pct = if total > 0 { 100.0 * agree as f64 / total as f64 } else { 100.0 };
    rec.passed = pct >= 95.0;
    rec.worst = pct;
    rec.location = first_bad.map(|p| [p.x, p.y]);
    rec.details.insert("agreement_percent".into(), pct);
    rec.details.insert("degenerate_nodes".into(), degenerate as f64);
    rec.details.insert("nodes".into(), total as f64);
    Ok(rec)
}

/// Diagnostic: distance from `center` to the tangent lines along the shock
/// varies monotonically between its endpoint values.
pub fn check_tangent_distance(shock: &ShockCurve, center: Vec2, tol: &Tolerances) -> CheckRecord {
    let mut rec = CheckRecord::new(
        "tangent_distance",
        "distance from the origin to the tangent line is monotone along the shock",
        false,
        tol.tol,
    );
    let p = &shock.points;
    let n = p.len();
    let d: Vec<f64> = (0..n)
        .map(|k| {
            let t = if k == 0 {
                p[1] - p[0]
            } else if k == n - 1 {
                p[n - 1] - p[n - 2]
            } else {
                p[k + 1] - p[k - 1]
            };
            let t = t.normalize();
            let r = p[k] - center;
            (r.x * t.y - r.y * t.x).abs()
        })
        .collect();
    let steps: Vec<f64> = d.windows(2).map(|w| w[1] - w[0]).collect();
    let up = steps.iter().all(|&s| s >= -tol.tol);
    let down = steps.iter().all(|&s| s <= tol.tol);
    let spread = d.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - d.iter().cloned().fold(f64::INFINITY, f64::min);
    rec.passed = up || down;
    rec.worst = steps.iter().map(|s| s.abs()).fold(0.0, f64::max);
    if !rec.passed {
        let k = if up {
            0
        } else {
            steps.iter().position(|&s| s < -tol.tol).unwrap_or(0)
        };
        rec.location = Some([p[k].x, p[k].y]);
    }
    rec.details.insert("distance_p1".into(), d[0]);
    rec.details.insert("distance_p2".into(), d[n - 1]);
    rec.details.insert("spread".into(), spread);
    if spread < tol.tol {
        rec.note = Some("constant distance (degenerate case)".into());
    }
    rec
}

/// Residuals of the closed-form exterior states: the incident shock, and the
/// straight part of the reflected shock between `P0` and `P1`.
pub fn check_far_field(sol: &SolutionField) -> CheckRecord {
    let mut rec = CheckRecord::new(
        "far_field",
        "exterior states are exact; jump conditions hold on the incident shock and on the straight reflected segment",
        true,
        FAR_FIELD_TOL,
    );
    let c = &sol.config;
    let x0 = c.incident.xi1_0;
    let mut worst = Extremum::max();
    for y in [0.25 * x0, x0, 4.0 * x0] {
        let x = Vec2::new(x0, y);
        let (m, p) = rh_residual(&c.state0, &c.state1, x, Vec2::new(1.0, 0.0), &c.params);
        worst.push_max(m.abs().max(p.abs()), x);
    }
    rec.details.insert("incident_residual".into(), worst.value);
    if let (Some(p0), true) = (c.p0, c.has_sonic_arc()) {
        let e = c.cone.e_s1;
        let nu = Vec2::new(-e.y, e.x);
        let mut seg = Extremum::max();
        for s in [0.25, 0.5, 0.75] {
            let x = p0 + s * (c.p1 - p0);
            let (m, p) = rh_residual(&c.state1, &c.state2, x, nu, &c.params);
            seg.push_max(m.abs().max(p.abs()), x);
        }
        rec.details.insert("reflected_segment_residual".into(), seg.value);
        if seg.value > worst.value || seg.value.is_nan() {
            worst = seg;
        }
    }
    rec.passed = worst.value < FAR_FIELD_TOL;
    rec.worst = worst.value;
    rec.location = worst.loc();
    rec
}

/// Aggregated result of all checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub verdict: bool,
    pub first_failure: Option<String>,
    pub theta_w_deg: f64,
    pub tolerances: Tolerances,
    pub input_hash: String,
    pub checks: Vec<CheckRecord>,
}

impl AdmissibilityReport {
    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Failing mandatory checks, in report order.
    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| c.mandatory && !c.passed).map(|c| c.name.as_str()).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Plain-text table for terminals.
    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{:<26} {:<10} {:<6} {:>14} {:>12}  location", "check", "kind", "result", "worst", "tolerance");
        for c in &self.checks {
            let loc = c.location.map_or("-".to_string(), |p| format!("({:.5}, {:.5})", p[0], p[1]));
            let _ = writeln!(
                s,
                "{:<26} {:<10} {:<6} {:>14.6e} {:>12.3e}  {}",
                c.name,
                if c.mandatory { "mandatory" } else { "diagnostic" },
                if c.passed { "pass" } else { "FAIL" },
                c.worst,
                c.tolerance,
                loc
            );
        }
        let _ = writeln!(s, "verdict: {}", if self.verdict { "PASS" } else { "FAIL" });
        s
    }
}

/// SHA-256 of everything the checks read from a field.
pub fn field_hash(sol: &SolutionField) -> String {
    let mut h = Sha256::new();
    let p = &sol.config.params;
    for v in [p.rho0, p.rho1, p.gamma, sol.theta_w, sol.meta.cutoff_width] {
        h.update(v.to_le_bytes());
    }
    h.update((sol.mesh.n1 as u64).to_le_bytes());
    h.update((sol.mesh.n2 as u64).to_le_bytes());
    for x in sol.mesh.nodes.iter().chain(&sol.shock.points) {
        h.update(x.x.to_le_bytes());
        h.update(x.y.to_le_bytes());
    }
    for v in &sol.phi {
        h.update(v.to_le_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Runs every check and aggregates the verdict over the mandatory ones.
pub fn full_report(sol: &SolutionField) -> Result<AdmissibilityReport> {
    let tol = Tolerances::for_field(sol);
    let flat = sol.is_flat_wall();
    let checks = vec![
        check_ellipticity(sol, &tol),
        check_shock_inequalities(sol, &tol),
        check_pinching(sol, &tol),
        check_cone_monotonicity(sol, &tol),
        check_wedge_monotonicity(sol, &tol),
        check_graph_and_convexity(&sol.shock, &cone_samples(&sol.config.cone), &tol, flat)?,
        check_far_field(sol),
        check_phi_tau_tau_equivalence(sol, &tol)?,
        check_tangent_distance(&sol.shock, Vec2::zeros(), &tol),
    ];
    let first_failure = checks.iter().find(|c| c.mandatory && !c.passed).map(|c| c.name.clone());
    Ok(AdmissibilityReport {
        verdict: first_failure.is_none(),
        first_failure,
        theta_w_deg: sol.theta_w.to_degrees(),
        tolerances: tol,
        input_hash: field_hash(sol),
        checks,
    })
}
