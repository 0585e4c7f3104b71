use std::sync::OnceLock;

use proptest::prelude::*;
use shockrefl::gas::{GasParams, UniformState};
use shockrefl::geometry::SquareMap;
use shockrefl::shock::normal_reflection_state;
use shockrefl::solver::*;
use shockrefl::Vec2;

fn gas() -> GasParams {
    GasParams::new(1.0, 2.0, 2.0).unwrap()
}

fn rest_k() -> f64 {
    normal_reflection_state(&gas()).unwrap().0.k
}

#[test]
fn small_system_with_duplicates() {
    let mut c = SparseLuCache::new();
    let pairs = [(0, 0), (0, 0), (0, 1), (1, 0), (1, 1)];
    let vals = [1.0, 1.0, 1.0, 1.0, 3.0];
    let x = c.solve(2, &pairs, &vals, &[3.0, 5.0]).unwrap();
    assert!((2.0 * x[0] + x[1] - 3.0).abs() < 1e-14);
    assert!((x[0] + 3.0 * x[1] - 5.0).abs() < 1e-14);
    let x = c.solve(2, &pairs, &[2.0, 0.0, 0.0, 0.0, 4.0], &[2.0, 4.0]).unwrap();
    assert!((x[0] - 1.0).abs() < 1e-14 && (x[1] - 1.0).abs() < 1e-14);
}

#[test]
fn singular_system_is_reported() {
    let mut c = SparseLuCache::new();
    let r = c.solve(2, &[(0, 0), (1, 0)], &[1.0, 1.0], &[1.0, 1.0]);
    assert!(r.is_err());
}

#[test]
fn uniform_states_are_reproduced_exactly() {
    let g = gas();
    let k = rest_k();
    let reference = UniformState::new(0.0, 0.0, k, &g).unwrap();
    let target = UniformState::new(0.05, -0.03, k - 0.01, &g).unwrap();
    let exact = move |x: Vec2| target.phi(x);
    let mesh = SquareMap::rectangle(-0.6, 0.4, 0.1, 0.9, 17, 13);
    let problem = BvpProblem {
        mesh: &mesh,
        gas: &g,
        reference,
        cutoff: None,
        boundary: BvpBoundary::Dirichlet(&exact),
        source: None,
    };
    // Start halfway between the reference and the target; the boundary rows
    // pull the Dirichlet values in during the first Newton step.
    let guess: Vec<f64> = mesh.nodes.iter().map(|&x| 0.5 * (exact(x) - reference.phi(x))).collect();
    let (psi, report) = problem.solve(&guess, 1e-12, 30, &mut SparseLuCache::new()).unwrap();
    let err = psi
        .iter()
        .zip(&mesh.nodes)
        .map(|(p, x)| (p + reference.phi(*x) - exact(*x)).abs())
        .fold(0.0, f64::max);
    assert!(err < 1e-11, "error {err}");
    assert!(report.worst_mach < 1.0);
}

/// A converged nonuniform solution with Dirichlet data.
fn converged() -> &'static (SquareMap, Vec<f64>, UniformState) {
    static S: OnceLock<(SquareMap, Vec<f64>, UniformState)> = OnceLock::new();
    S.get_or_init(|| {
        let g = gas();
        let k = rest_k();
        let reference = UniformState::new(0.0, 0.0, k, &g).unwrap();
        let data = move |x: Vec2| reference.phi(x) + 0.03 * (2.0 * x.x).sin() * (3.0 * x.y).cos();
        let mesh = SquareMap::rectangle(-0.6, 0.4, 0.1, 0.9, 21, 21);
        let psi = {
            let problem = BvpProblem {
                mesh: &mesh,
                gas: &g,
                reference,
                cutoff: None,
                boundary: BvpBoundary::Dirichlet(&data),
                source: None,
            };
            problem.solve(&vec![0.0; mesh.len()], 1e-13, 40, &mut SparseLuCache::new()).unwrap().0
        };
        (mesh, psi, reference)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn interior_blocks_conserve_mass(i0 in 1usize..19, j0 in 1usize..19, di in 1usize..10, dj in 1usize..10) {
        let (mesh, psi, reference) = converged();
        let g = gas();
        let none = |_: Vec2| 0.0;
        let problem = BvpProblem {
            mesh,
            gas: &g,
            reference: *reference,
            cutoff: None,
            boundary: BvpBoundary::Dirichlet(&none),
            source: None,
        };
        let (i1, j1) = ((i0 + di).min(20), (j0 + dj).min(20));
        let (flux, volume) = problem.block_balance(psi, i0..i1, j0..j1).unwrap();
        prop_assert!((flux + volume).abs() <= 1e-10 * volume.abs().max(1e-3), "flux {flux}, volume {volume}");
    }
}
