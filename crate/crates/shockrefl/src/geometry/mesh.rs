//! Boundary-fitted structured grid on the elliptic region.
//!
//! The unit square `(s, tau)` is mapped onto the region by transfinite (Coons)
//! interpolation of its four sides:
//!
//! | side      | square edge | region boundary         |
//! |-----------|-------------|-------------------------|
//! | shock     | `s = 0`     | `P1 -> P2`              |
//! | wedge     | `s = 1`     | `P4 -> P3`              |
//! | sonic     | `tau = 0`   | arc `P1 -> P4`          |
//! | symmetry  | `tau = 1`   | `P2 -> P3`              |
//!
//! Straight sides and the shock are parameterized by arclength and the arc by
//! angle. When a sonic arc is present the boundary-normal coordinate is
//! `t = tau^2`, so the grid spacing next to the arc scales like the square root
//! of the distance to it. Without an arc the sonic side collapses to `P0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::config::ReflectionConfiguration;
use crate::Vec2;

/// Which physical boundary each side of the square is sent to.
pub const SIDE_ASSIGNMENT: [(&str, &str); 4] = [
    ("s=0", "shock P1->P2"),
    ("s=1", "wedge P4->P3"),
    ("t=0", "sonic arc P1->P4"),
    ("t=1", "symmetry P2->P3"),
];

/// Structured grid with `n1` nodes from shock to wedge and `n2` from sonic side to axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareMap {
    pub n1: usize,
    pub n2: usize,
    /// Node positions, row-major in `i` (shock to wedge) then `j`.
    pub nodes: Vec<Vec2>,
    /// Whether the side `t = 0` collapses to a single point.
    pub collapsed_sonic: bool,
    /// Whether the quadratic stretching `t = tau^2` is used.
    pub stretched: bool,
}

/// Resamples a polyline at arclength fractions.
pub fn resample_polyline(poly: &[Vec2], fracs: &[f64]) -> Vec<Vec2> {
    let mut cum = Vec::with_capacity(poly.len());
    cum.push(0.0);
    for w in poly.windows(2) {
        let last = *cum.last().unwrap();
        cum.push(last + (w[1] - w[0]).norm());
    }
    let total = *cum.last().unwrap();
    fracs
        .iter()
        .map(|&f| {
            let target = f.clamp(0.0, 1.0) * total;
            let k = cum.partition_point(|&c| c < target).clamp(1, poly.len() - 1);
            let seg = cum[k] - cum[k - 1];
            let a = if seg > 0.0 { (target - cum[k - 1]) / seg } else { 0.0 };
            poly[k - 1] + a * (poly[k] - poly[k - 1])
        })
        .collect()
}

/// Second-order difference weights along one index direction.
///
/// `stretched_start` selects a first-order forward difference at index 0,
/// which is where a quadratic stretching makes the second-order one vanish.
fn diff_weights(k: usize, n: usize, stretched_start: bool) -> [(usize, f64); 3] {
    if k == 0 {
        if stretched_start {
            [(0, -1.0), (1, 1.0), (2, 0.0)]
        } else {
            [(0, -1.5), (1, 2.0), (2, -0.5)]
        }
    } else if k == n - 1 {
        [(n - 1, 1.5), (n - 2, -2.0), (n - 3, 0.5)]
    } else {
        [(k - 1, -0.5), (k + 1, 0.5), (k, 0.0)]
    }
}

impl SquareMap {
    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * self.n2 + j
    }

    pub fn node(&self, i: usize, j: usize) -> Vec2 {
        self.nodes[i * self.n2 + j]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Transfinite map of the reflection region for a given shock polyline.
    pub fn build(
        config: &ReflectionConfiguration,
        shock: &[Vec2],
        n1: usize,
        n2: usize,
    ) -> Result<Self> {
        if n1 < 3 || n2 < 3 {
            return Err(Error::InvalidParameter(format!("grid {n1}x{n2} is too small")));
        }
        let stretched = config.has_sonic_arc();
        let s: Vec<f64> = (0..n1).map(|i| i as f64 / (n1 - 1) as f64).collect();
        let t: Vec<f64> = (0..n2)
            .map(|j| {
                let tau = j as f64 / (n2 - 1) as f64;
                if stretched {
                    tau * tau
                } else {
                    tau
                }
            })
            .collect();
        let sh = resample_polyline(shock, &t);
        let p1 = sh[0];
        let p2 = sh[n2 - 1];
        let (p3, p4) = (config.p3, config.p4);
        let sonic: Vec<Vec2> = s.iter().map(|&x| config.sonic_arc_point(x)).collect();
        let mut nodes = Vec::with_capacity(n1 * n2);
        for (i, &si) in s.iter().enumerate() {
            for (j, &tj) in t.iter().enumerate() {
                let we = p4 + tj * (p3 - p4);
                let sy = p2 + si * (p3 - p2);
                let x = (1.0 - si) * sh[j] + si * we + (1.0 - tj) * sonic[i] + tj * sy
                    - ((1.0 - si) * (1.0 - tj) * p1
                        + si * (1.0 - tj) * p4
                        + (1.0 - si) * tj * p2
                        + si * tj * p3);
                nodes.push(x);
            }
        }
        let map = Self { n1, n2, nodes, collapsed_sonic: !stretched, stretched };
        map.check_folds()?;
        Ok(map)
    }

    /// Uniform grid on an axis-aligned rectangle; `s` runs along `xi1` and `t`
    /// downward along `xi2`, matching the orientation of the reflection grid.
    pub fn rectangle(x0: f64, x1: f64, y0: f64, y1: f64, n1: usize, n2: usize) -> Self {
        let mut nodes = Vec::with_capacity(n1 * n2);
        for i in 0..n1 {
            for j in 0..n2 {
                let s = i as f64 / (n1 - 1) as f64;
                let t = j as f64 / (n2 - 1) as f64;
                nodes.push(Vec2::new(x0 + s * (x1 - x0), y1 - t * (y1 - y0)));
            }
        }
        Self { n1, n2, nodes, collapsed_sonic: false, stretched: false }
    }

    /// Fails when corner cross products of non-degenerate cells change sign.
    pub fn check_folds(&self) -> Result<()> {
        let mut sign = 0.0;
        for i in 0..self.n1 - 1 {
            for j in 0..self.n2 - 1 {
                let c = [self.node(i, j), self.node(i + 1, j), self.node(i + 1, j + 1), self.node(i, j + 1)];
                for k in 0..4 {
                    let a = c[(k + 1) % 4] - c[k];
                    let b = c[(k + 3) % 4] - c[k];
                    let scale = a.norm() * b.norm();
                    if scale == 0.0 {
                        continue;
                    }
                    let cr = a.x * b.y - a.y * b.x;
                    if cr.abs() <= 1e-14 * scale {
                        continue;
                    }
                    if sign == 0.0 {
                        sign = cr.signum();
                    } else if cr.signum() != sign {
                        return Err(Error::FoldedMesh { i, j });
                    }
                }
            }
        }
        Ok(())
    }

    /// Largest edge length of the grid.
    pub fn max_spacing(&self) -> f64 {
        let mut h: f64 = 0.0;
        for i in 0..self.n1 {
            for j in 0..self.n2 {
                if i + 1 < self.n1 {
                    h = h.max((self.node(i + 1, j) - self.node(i, j)).norm());
                }
                if j + 1 < self.n2 {
                    h = h.max((self.node(i, j + 1) - self.node(i, j)).norm());
                }
            }
        }
        h
    }

    /// Nodes of the shock side, `P1` first.
    pub fn shock_nodes(&self) -> Vec<Vec2> {
        (0..self.n2).map(|j| self.node(0, j)).collect()
    }

    /// Closed boundary polyline: shock, symmetry, wedge, sonic side.
    pub fn boundary_polyline(&self) -> Vec<Vec2> {
        let mut b = Vec::new();
        for j in 0..self.n2 {
            b.push(self.node(0, j));
        }
        for i in 1..self.n1 {
            b.push(self.node(i, self.n2 - 1));
        }
        for j in (0..self.n2 - 1).rev() {
            b.push(self.node(self.n1 - 1, j));
        }
        for i in (0..self.n1 - 1).rev() {
            b.push(self.node(i, 0));
        }
        b
    }

    /// Index-space derivative pair `(d/ds, d/dt)` of a nodal field.
    fn index_derivatives<T, F>(&self, i: usize, j: usize, f: F) -> (T, T)
    where
        T: std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T> + Copy,
        F: Fn(usize, usize) -> T,
    {
        let wi = diff_weights(i, self.n1, false);
        let wj = diff_weights(j, self.n2, self.stretched);
        let ds = f(wi[0].0, j) * wi[0].1 + f(wi[1].0, j) * wi[1].1 + f(wi[2].0, j) * wi[2].1;
        let dt = f(i, wj[0].0) * wj[0].1 + f(i, wj[1].0) * wj[1].1 + f(i, wj[2].0) * wj[2].1;
        (ds, dt)
    }

    /// Physical gradient of a nodal field by finite differences in the square.
    ///
    /// Returns `None` where the map is singular (the collapsed sonic side).
    pub fn node_gradient(&self, f: &[f64], i: usize, j: usize) -> Option<Vec2> {
        let (xs, xt) = self.index_derivatives(i, j, |a, b| self.node(a, b));
        let (fs, ft) = self.index_derivatives(i, j, |a, b| f[self.idx(a, b)]);
        let jac = xs.x * xt.y - xs.y * xt.x;
        let scale = xs.norm() * xt.norm();
        if !(jac.abs() > 1e-12 * scale) || scale == 0.0 {
            return None;
        }
        Some(Vec2::new((xt.y * fs - xs.y * ft) / jac, (-xt.x * fs + xs.x * ft) / jac))
    }

    /// Bilinear interpolation of the node positions in cell `(i, j)`.
    pub fn cell_point(&self, i: usize, j: usize, a: f64, b: f64) -> Vec2 {
        let x00 = self.node(i, j);
        let x10 = self.node(i + 1, j);
        let x01 = self.node(i, j + 1);
        let x11 = self.node(i + 1, j + 1);
        (1.0 - a) * (1.0 - b) * x00 + a * (1.0 - b) * x10 + (1.0 - a) * b * x01 + a * b * x11
    }

    /// Map from the unit square `(s, tau)`.
    pub fn forward(&self, s: f64, tau: f64) -> Vec2 {
        let (i, a) = split_coord(s, self.n1);
        let (j, b) = split_coord(tau, self.n2);
        self.cell_point(i, j, a, b)
    }

    /// Spatial index for repeated inverse evaluations.
    pub fn locator(&self) -> CellLocator<'_> {
        CellLocator::new(self)
    }

    /// Inverse map into the unit square, `None` outside the grid.
    pub fn inverse(&self, xi: Vec2) -> Option<(f64, f64)> {
        self.locator().inverse(xi)
    }

    /// Bilinear interpolation of a nodal quantity at a located point.
    pub fn interpolate<T>(&self, values: &[T], loc: (usize, usize, f64, f64)) -> T
    where
        T: std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T> + Copy,
    {
        let (i, j, a, b) = loc;
        values[self.idx(i, j)] * ((1.0 - a) * (1.0 - b))
            + values[self.idx(i + 1, j)] * (a * (1.0 - b))
            + values[self.idx(i, j + 1)] * ((1.0 - a) * b)
            + values[self.idx(i + 1, j + 1)] * (a * b)
    }
}

fn split_coord(s: f64, n: usize) -> (usize, f64) {
    let x = s.clamp(0.0, 1.0) * (n - 1) as f64;
    let k = (x.floor() as usize).min(n - 2);
    (k, x - k as f64)
}

/// Bucket grid over cell bounding boxes.
pub struct CellLocator<'a> {
    map: &'a SquareMap,
    origin: Vec2,
    cell: Vec2,
    nb: usize,
    buckets: Vec<Vec<(usize, usize)>>,
}

impl<'a> CellLocator<'a> {
    fn new(map: &'a SquareMap) -> Self {
        let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = -lo;
        for p in &map.nodes {
            lo = lo.inf(p);
            hi = hi.sup(p);
        }
        let nb = ((map.n1 * map.n2) as f64).sqrt().ceil().max(1.0) as usize;
        let span = (hi - lo).map(|v| v.max(1e-12));
        let cell = span / nb as f64;
        let mut buckets = vec![Vec::new(); nb * nb];
        for i in 0..map.n1 - 1 {
            for j in 0..map.n2 - 1 {
                let c = [map.node(i, j), map.node(i + 1, j), map.node(i, j + 1), map.node(i + 1, j + 1)];
                let mut clo = c[0];
                let mut chi = c[0];
                for p in &c[1..] {
                    clo = clo.inf(p);
                    chi = chi.sup(p);
                }
                let (bx0, by0) = Self::bucket_of(lo, cell, nb, clo);
                let (bx1, by1) = Self::bucket_of(lo, cell, nb, chi);
                for bx in bx0..=bx1 {
                    for by in by0..=by1 {
                        buckets[bx * nb + by].push((i, j));
                    }
                }
            }
        }
        Self { map, origin: lo, cell, nb, buckets }
    }

    fn bucket_of(lo: Vec2, cell: Vec2, nb: usize, p: Vec2) -> (usize, usize) {
        let bx = (((p.x - lo.x) / cell.x).floor().max(0.0) as usize).min(nb - 1);
        let by = (((p.y - lo.y) / cell.y).floor().max(0.0) as usize).min(nb - 1);
        (bx, by)
    }

    /// Cell index and local bilinear coordinates of a point.
    pub fn locate(&self, xi: Vec2) -> Option<(usize, usize, f64, f64)> {
        let tol = 1e-10;
        let (bx, by) = Self::bucket_of(self.origin, self.cell, self.nb, xi);
        let rel = (xi - self.origin).component_div(&self.cell);
        if rel.x < -1e-9 || rel.y < -1e-9 || rel.x > self.nb as f64 + 1e-9 || rel.y > self.nb as f64 + 1e-9 {
            return None;
        }
        for &(i, j) in &self.buckets[bx * self.nb + by] {
            if let Some((a, b)) = invert_bilinear(self.map, i, j, xi) {
                if (-tol..=1.0 + tol).contains(&a) && (-tol..=1.0 + tol).contains(&b) {
                    return Some((i, j, a.clamp(0.0, 1.0), b.clamp(0.0, 1.0)));
                }
            }
        }
        None
    }

    /// Inverse map into the unit square.
    pub fn inverse(&self, xi: Vec2) -> Option<(f64, f64)> {
        self.locate(xi).map(|(i, j, a, b)| {
            ((i as f64 + a) / (self.map.n1 - 1) as f64, (j as f64 + b) / (self.map.n2 - 1) as f64)
        })
    }
}

fn invert_bilinear(map: &SquareMap, i: usize, j: usize, xi: Vec2) -> Option<(f64, f64)> {
    let x00 = map.node(i, j);
    let x10 = map.node(i + 1, j);
    let x01 = map.node(i, j + 1);
    let x11 = map.node(i + 1, j + 1);
    let (mut a, mut b) = (0.5, 0.5);
    for _ in 0..50 {
        let p = map.cell_point(i, j, a, b);
        let r = p - xi;
        if r.norm() < 1e-14 {
            return Some((a, b));
        }
        let xa = (1.0 - b) * (x10 - x00) + b * (x11 - x01);
        let xb = (1.0 - a) * (x01 - x00) + a * (x11 - x10);
        let det = xa.x * xb.y - xa.y * xb.x;
        if det.abs() < 1e-300 {
            return None;
        }
        let da = (xb.y * r.x - xb.x * r.y) / det;
        let db = (-xa.y * r.x + xa.x * r.y) / det;
        a -= da;
        b -= db;
        if !(a.is_finite() && b.is_finite()) || a.abs() > 10.0 || b.abs() > 10.0 {
            return None;
        }
    }
    let r = map.cell_point(i, j, a, b) - xi;
    (r.norm() < 1e-11).then_some((a, b))
}
