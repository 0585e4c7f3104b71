//! Distance between two discrete solutions on different domains.
//!
//! The distance is `sup |phi_a - phi_b| + sup |D phi_a - D phi_b|` over the
//! common part of the two domains plus the Hausdorff distance between their
//! closures. The suprema are taken over the nodes of each grid that fall
//! inside the other grid, comparing with the bilinear interpolant there, in
//! both directions. The Hausdorff term is computed between the boundary
//! polylines.

use crate::error::{Error, Result};
use crate::solver::SolutionField;
use crate::Vec2;

fn point_segment(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let d = b - a;
    let len2 = d.norm_squared();
    let t = if len2 > 0.0 { ((p - a).dot(&d) / len2).clamp(0.0, 1.0) } else { 0.0 };
    (p - (a + t * d)).norm()
}

fn directed_hausdorff(from: &[Vec2], to: &[Vec2]) -> f64 {
    let mut worst: f64 = 0.0;
    for &p in from {
        let mut best = f64::INFINITY;
        for k in 0..to.len() {
            let (a, b) = (to[k], to[(k + 1) % to.len()]);
            best = best.min(point_segment(p, a, b));
        }
        worst = worst.max(best);
    }
    worst
}

/// Hausdorff distance between two closed polylines.
pub fn polyline_hausdorff(a: &[Vec2], b: &[Vec2]) -> f64 {
    directed_hausdorff(a, b).max(directed_hausdorff(b, a))
}

/// Largest value and gradient differences at nodes of `a` located in `b`.
fn one_sided(a: &SolutionField, b: &SolutionField) -> (f64, f64, usize) {
    let loc = b.mesh.locator();
    let gb = b.gradients();
    let ga = a.gradients();
    let (mut dv, mut dg, mut count) = (0.0f64, 0.0f64, 0);
    for (k, &x) in a.mesh.nodes.iter().enumerate() {
        if let Some(l) = loc.locate(x) {
            let v = b.mesh.interpolate(&b.phi, l);
            let g = b.mesh.interpolate(&gb, l);
            dv = dv.max((a.phi[k] - v).abs());
            dg = dg.max((ga[k] - g).norm());
            count += 1;
        }
    }
    (dv, dg, count)
}

/// Discrete C1 distance between two solutions plus the Hausdorff distance
/// between their domains.
pub fn c1_family_distance(a: &SolutionField, b: &SolutionField) -> Result<f64> {
    let (v1, g1, c1) = one_sided(a, b);
    let (v2, g2, c2) = one_sided(b, a);
    if c1 + c2 == 0 {
        return Err(Error::EmptyOverlap);
    }
    let h = polyline_hausdorff(&a.mesh.boundary_polyline(), &b.mesh.boundary_polyline());
    Ok(v1.max(v2) + g1.max(g2) + h)
}
