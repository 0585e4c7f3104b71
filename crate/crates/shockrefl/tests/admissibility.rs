use std::sync::OnceLock;

use proptest::prelude::*;
use shockrefl::admissibility::*;
use shockrefl::gas::GasParams;
use shockrefl::solver::{continuation_sweep, normal_reflection, IterationParams, SolutionField};

fn member_88() -> &'static SolutionField {
    static S: OnceLock<SolutionField> = OnceLock::new();
    S.get_or_init(|| {
        let g = GasParams::new(1.0, 2.0, 2.0).unwrap();
        let grid: Vec<f64> = [90.0f64, 89.0, 88.0].iter().map(|d| d.to_radians()).collect();
        let r = continuation_sweep(&g, &grid, &IterationParams::default(), 33, 33).unwrap();
        r.members.last().unwrap().clone()
    })
}

#[test]
fn converged_member_is_admissible() {
    let rep = full_report(member_88()).unwrap();
    assert!(rep.verdict, "{}", rep.table());
    assert!(rep.first_failure.is_none());
    assert!(rep.failures().is_empty());
    for name in ["ellipticity", "shock_inequalities", "pinching", "cone_monotonicity", "wedge_monotonicity", "graph_and_convexity", "far_field"] {
        let c = rep.check(name).unwrap_or_else(|| panic!("missing {name}"));
        assert!(c.mandatory, "{name}");
    }
    assert!(!rep.check("tangent_distance").unwrap().mandatory);
}

#[test]
fn normal_reflection_is_admissible_with_a_flat_shock() {
    let g = GasParams::new(1.0, 2.0, 2.0).unwrap();
    let sol = normal_reflection(&g, 17, 17, &IterationParams::default()).unwrap();
    let rep = full_report(&sol).unwrap();
    assert!(rep.verdict, "{}", rep.table());
}

#[test]
fn report_json_round_trips() {
    let rep = full_report(member_88()).unwrap();
    let back: AdmissibilityReport = serde_json::from_str(&rep.to_json().unwrap()).unwrap();
    assert_eq!(back, rep);
    assert!(rep.table().ends_with("verdict: PASS\n"));
}

#[test]
fn tolerance_scales_with_the_grid() {
    let t = Tolerances::for_field(member_88());
    assert!(t.h > 0.0);
    assert!((t.tol - 10.0 * t.h.powf(1.5)).abs() <= 1e-15 * t.tol);
}

#[test]
fn verdict_ignores_diagnostic_checks() {
    let mut rep = full_report(member_88()).unwrap();
    for c in rep.checks.iter_mut().filter(|c| !c.mandatory) {
        c.passed = false;
    }
    assert!(rep.failures().is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn field_hash_sees_every_nodal_value(k in 0usize..(33 * 33), bump in prop_oneof![Just(1e-12), Just(-1e-9), Just(1e-3)]) {
        let base = member_88();
        let mut sol = base.clone();
        sol.phi[k] += bump;
        prop_assert_ne!(field_hash(&sol), field_hash(base));
    }

    #[test]
    fn lifting_the_field_above_phi1_is_a_pinching_failure(k in 0usize..(33 * 33)) {
        let base = member_88();
        let mut sol = base.clone();
        let x = sol.mesh.nodes[k];
        let tol = Tolerances::for_field(&sol);
        sol.phi[k] = sol.config.state1.phi(x) + 2.0 * tol.tol;
        prop_assert!(!check_pinching(&sol, &tol).passed);
    }
}
