//! The reflected shock as a graph `S = f_e(T)` over a cone direction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Vec2;

/// Shock polyline from `P1` to `P2`, with the direction used for its graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShockCurve {
    pub points: Vec<Vec2>,
    pub direction_e: Vec2,
}

/// Graph samples `(T, S)` of the shock in the basis `{e, e_perp}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSamples {
    pub e: Vec2,
    pub e_perp: Vec2,
    pub t: Vec<f64>,
    pub s: Vec<f64>,
}

impl GraphSamples {
    /// True when `T` is strictly increasing, i.e. the polyline is a graph.
    pub fn is_graph(&self) -> bool {
        self.t.windows(2).all(|w| w[1] > w[0])
    }

    /// Second-order first derivative on the nonuniform grid (one-sided at the ends).
    pub fn first_derivative(&self) -> Vec<f64> {
        let (t, s) = (&self.t, &self.s);
        let n = t.len();
        let mut d = vec![0.0; n];
        for k in 0..n {
            d[k] = if k == 0 {
                (s[1] - s[0]) / (t[1] - t[0])
            } else if k == n - 1 {
                (s[n - 1] - s[n - 2]) / (t[n - 1] - t[n - 2])
            } else {
                let (h1, h2) = (t[k] - t[k - 1], t[k + 1] - t[k]);
                (s[k + 1] * h1 * h1 - s[k - 1] * h2 * h2 + s[k] * (h2 * h2 - h1 * h1))
                    / (h1 * h2 * (h1 + h2))
            };
        }
        d
    }

    /// Three-point second derivative on the nonuniform grid; the two ends are
    /// copied from their neighbours.
    pub fn second_derivative(&self) -> Vec<f64> {
        let (t, s) = (&self.t, &self.s);
        let n = t.len();
        let mut d = vec![0.0; n];
        for k in 1..n - 1 {
            let (h1, h2) = (t[k] - t[k - 1], t[k + 1] - t[k]);
            d[k] = 2.0 * (s[k + 1] * h1 - s[k] * (h1 + h2) + s[k - 1] * h2) / (h1 * h2 * (h1 + h2));
        }
        if n >= 3 {
            d[0] = d[1];
            d[n - 1] = d[n - 2];
        }
        d
    }
}

impl ShockCurve {
    pub fn new(points: Vec<Vec2>, direction_e: Vec2) -> Self {
        Self { points, direction_e }
    }

    pub fn p1(&self) -> Vec2 {
        self.points[0]
    }

    pub fn p2(&self) -> Vec2 {
        *self.points.last().expect("non-empty shock")
    }

    /// Unit tangent at `P1`, pointing into the curve.
    pub fn tangent_p1(&self) -> Vec2 {
        (self.points[1] - self.points[0]).normalize()
    }

    /// Unit tangent at `P2`, oriented like the curve (from `P1` towards `P2`).
    pub fn tangent_p2(&self) -> Vec2 {
        let n = self.points.len();
        (self.points[n - 1] - self.points[n - 2]).normalize()
    }

    /// `(T, S)` coordinates for direction `e`, with `e_perp . tau_P1 > 0`.
    pub fn graph(&self, e: Vec2) -> Result<GraphSamples> {
        if self.points.len() < 2 {
            return Err(Error::TooFewSamples(self.points.len()));
        }
        let e = e.normalize();
        let mut e_perp = Vec2::new(-e.y, e.x);
        if e_perp.dot(&self.tangent_p1()) < 0.0 {
            e_perp = -e_perp;
        }
        let t = self.points.iter().map(|p| p.dot(&e_perp)).collect();
        let s = self.points.iter().map(|p| p.dot(&e)).collect();
        Ok(GraphSamples { e, e_perp, t, s })
    }

    /// Samples in the curve's own direction.
    pub fn samples(&self) -> Result<GraphSamples> {
        self.graph(self.direction_e)
    }

    /// Angle between the incoming tangent at `P2` and the outgoing tangent of
    /// the mirror image across the `xi1` axis; zero for a C1 join.
    pub fn reflected_join_angle(&self) -> f64 {
        let t = self.tangent_p2();
        let outgoing = Vec2::new(-t.x, t.y);
        t.dot(&outgoing).clamp(-1.0, 1.0).acos()
    }
}
