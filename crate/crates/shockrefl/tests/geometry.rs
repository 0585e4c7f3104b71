use std::sync::OnceLock;

use approx::assert_relative_eq;
use proptest::prelude::*;
use shockrefl::gas::GasParams;
use shockrefl::geometry::distance::polyline_hausdorff;
use shockrefl::geometry::mesh::resample_polyline;
use shockrefl::geometry::*;
use shockrefl::shock::state2_solve;
use shockrefl::solver::{normal_reflection, IterationParams, SolutionField};
use shockrefl::Vec2;

fn normal_field() -> &'static SolutionField {
    static F: OnceLock<SolutionField> = OnceLock::new();
    F.get_or_init(|| {
        let g = GasParams::new(1.0, 2.0, 2.0).unwrap();
        normal_reflection(&g, 17, 17, &IterationParams::default()).unwrap()
    })
}

#[test]
fn rectangle_gradient_is_exact_for_linear_fields() {
    let m = SquareMap::rectangle(-1.0, 0.0, 0.0, 2.0, 7, 9);
    let f: Vec<f64> = m.nodes.iter().map(|p| 2.0 * p.x - 3.0 * p.y + 1.0).collect();
    for i in 0..m.n1 {
        for j in 0..m.n2 {
            let g = m.node_gradient(&f, i, j).unwrap();
            assert!((g - Vec2::new(2.0, -3.0)).norm() < 1e-12);
        }
    }
}

#[test]
fn resample_keeps_endpoints() {
    let poly = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0)];
    let r = resample_polyline(&poly, &[0.0, 0.25, 0.5, 1.0]);
    assert_eq!(r[0], poly[0]);
    assert!((r[1] - Vec2::new(0.5, 0.0)).norm() < 1e-15);
    assert!((r[2] - Vec2::new(1.0, 0.0)).norm() < 1e-15);
    assert_eq!(r[3], poly[2]);
}

#[test]
fn parabola_second_derivative() {
    let pts: Vec<Vec2> = (0..21)
        .map(|k| {
            let t = -1.0 + 0.1 * k as f64;
            Vec2::new(t * t, t)
        })
        .collect();
    let c = ShockCurve::new(pts, Vec2::new(-1.0, 0.0));
    let g = c.samples().unwrap();
    assert!(g.is_graph());
    for v in g.second_derivative() {
        assert!((v + 2.0).abs() < 1e-9, "{v}");
    }
}

#[test]
fn hausdorff_of_shifted_squares() {
    let sq = |s: f64| vec![Vec2::new(s, 0.0), Vec2::new(1.0 + s, 0.0), Vec2::new(1.0 + s, 1.0), Vec2::new(s, 1.0)];
    assert!((polyline_hausdorff(&sq(0.0), &sq(0.25)) - 0.25).abs() < 1e-15);
    assert_eq!(polyline_hausdorff(&sq(0.0), &sq(0.0)), 0.0);
}

#[test]
fn flat_wall_configuration_is_symmetric() {
    let g = GasParams::new(1.0, 2.0, 2.0).unwrap();
    let pair = state2_solve(&g, std::f64::consts::FRAC_PI_2).unwrap();
    let c = build_configuration(&g, std::f64::consts::FRAC_PI_2, &pair, 0.1).unwrap();
    assert_eq!(c.sonic_center, Vec2::zeros());
    assert!(c.cone.degenerate);
    assert_relative_eq!(c.cone.e_s1.y, -1.0, epsilon = 1e-15);
    assert_relative_eq!(c.p4.x, 0.0, epsilon = 1e-15);
    assert_relative_eq!(c.p1.norm(), c.sonic_radius, epsilon = 1e-14);
    assert_relative_eq!(c.p2.x, c.p1.x, epsilon = 1e-15);
    let half = c.cone.sample(0.5);
    assert_relative_eq!(half.x, -1.0, epsilon = 1e-14);
}

#[test]
fn supersonic_configuration_places_p1_on_the_sonic_circle() {
    let g = GasParams::new(1.0, 2.0, 2.0).unwrap();
    let t = 85f64.to_radians();
    let pair = state2_solve(&g, t).unwrap();
    let c = build_configuration(&g, t, &pair, 0.1).unwrap();
    assert!(c.has_sonic_arc());
    assert_relative_eq!((c.p1 - c.sonic_center).norm(), c.sonic_radius, max_relative = 1e-12);
    assert_relative_eq!((c.p4 - c.sonic_center).norm(), c.sonic_radius, max_relative = 1e-12);
    assert!(in_lambda(c.p1, t));
    assert!(c.cone.opening() > 0.0 && c.cone.opening() < std::f64::consts::PI);
}

#[test]
fn lambda_membership() {
    let t = 1.0;
    assert!(in_lambda(Vec2::new(-1.0, 0.5), t));
    assert!(!in_lambda(Vec2::new(1.0, 0.5), t));
    assert!(in_lambda(Vec2::new(1.0, 2.0), t));
    assert!(!in_lambda(Vec2::new(-1.0, -0.5), t));
}

#[test]
fn rectangle_round_trip() {
    let m = SquareMap::rectangle(-1.0, 0.0, 0.0, 2.0, 5, 6);
    let p = Vec2::new(-0.3, 0.7);
    let (s, t) = m.inverse(p).unwrap();
    assert!((m.forward(s, t) - p).norm() < 1e-12);
}

#[test]
fn normal_reflection_mesh_has_no_folds() {
    let f = normal_field();
    f.mesh.check_folds().unwrap();
    assert!(f.mesh.max_spacing() > 0.0);
    let b = f.mesh.boundary_polyline();
    assert_eq!(b.len(), 2 * (f.mesh.n1 + f.mesh.n2) - 3);
    assert_eq!(b.first(), b.last());
}

proptest! {
    #[test]
    fn lambda_excludes_the_lower_half_plane_and_the_wedge(
        theta in 0.1f64..1.5, x in -3.0f64..3.0, y in -3.0f64..3.0,
    ) {
        let xi = Vec2::new(x, y);
        let inside_wedge = x > 0.0 && y < x * theta.tan();
        prop_assert_eq!(in_lambda(xi, theta), y > 0.0 && !inside_wedge);
        if x < 0.0 && y > 0.0 {
            prop_assert!(in_lambda(xi, theta));
        }
    }

    #[test]
    fn rectangle_map_round_trips(s in 0.0f64..=1.0, t in 0.0f64..=1.0) {
        let m = SquareMap::rectangle(-0.6, 0.4, 0.1, 0.9, 9, 13);
        let x = m.forward(s, t);
        let (s2, t2) = m.inverse(x).unwrap();
        prop_assert!((s - s2).abs() < 1e-10 && (t - t2).abs() < 1e-10);
    }

    #[test]
    fn reflection_mesh_round_trips(s in 0.0f64..=1.0, t in 0.0f64..=1.0) {
        let m = &normal_field().mesh;
        let x = m.forward(s, t);
        let (s2, t2) = m.inverse(x).unwrap();
        prop_assert!((m.forward(s2, t2) - x).norm() < 1e-10);
    }

    #[test]
    fn cone_samples_are_unit_vectors(frac in 0.0f64..=1.0) {
        let g = GasParams::new(1.0, 2.0, 2.0).unwrap();
        let t = 80f64.to_radians();
        let pair = state2_solve(&g, t).unwrap();
        let c = build_configuration(&g, t, &pair, 0.1).unwrap();
        prop_assert!((c.cone.sample(frac).norm() - 1.0).abs() < 1e-14);
    }
}
