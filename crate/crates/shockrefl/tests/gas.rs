use approx::assert_relative_eq;
use proptest::prelude::*;
use shockrefl::gas::*;
use shockrefl::{Error, Vec2};

fn p(rho0: f64, gamma: f64) -> GasParams {
    GasParams::new(rho0, rho0 * 2.0, gamma).unwrap()
}

#[test]
fn density_trivial_values() {
    let g = p(1.0, 2.0);
    assert_eq!(density(0.0, 0.0, &g).unwrap(), 1.0);
    assert_relative_eq!(density(1.0, 0.0, &g).unwrap(), 0.5, epsilon = 1e-15);
}

#[test]
fn density_vacuum_is_an_error() {
    let g = p(1.0, 2.0);
    assert!(matches!(density(4.0, 0.0, &g), Err(Error::VacuumReached { .. })));
}

#[test]
fn sound_speed_values() {
    assert_eq!(sound_speed(1.0, &p(1.0, 1.4)).unwrap(), 1.0);
    assert_relative_eq!(sound_speed(4.0, &p(1.0, 3.0)).unwrap(), 4.0, epsilon = 1e-14);
    assert!(matches!(sound_speed(0.0, &p(1.0, 1.4)), Err(Error::NonpositiveDensity(_))));
}

#[test]
fn margin_at_rest_and_on_the_sonic_circle() {
    let g = p(1.0, 3.0);
    let m = ellipticity_margin(Vec2::zeros(), 0.0, &g).unwrap();
    assert_relative_eq!(m, 0.5f64.sqrt(), epsilon = 1e-15);
    let cs = critical_speed(0.1, &g).unwrap();
    let m = ellipticity_margin(Vec2::new(0.0, cs), 0.1, &g).unwrap();
    assert!(m.abs() < 1e-15);
}

#[test]
fn uniform_potential_values() {
    let g = p(1.0, 2.0);
    let s0 = UniformState::new(0.0, 0.0, 0.0, &g).unwrap();
    assert_eq!(uniform_potential(&s0, Vec2::zeros()), (0.0, Vec2::zeros()));
    let s = UniformState { u: 1.0, v: 0.0, k: 0.0, rho: 1.0, c: 1.0 };
    assert_eq!(uniform_potential(&s, Vec2::new(1.0, 0.0)), (0.5, Vec2::zeros()));
}

#[test]
fn rest_state_matches_the_constructor() {
    let g = GasParams::new(1.7, 2.5, 1.4).unwrap();
    let a = UniformState::rest(&g);
    let b = UniformState::new(0.0, 0.0, 0.0, &g).unwrap();
    assert_relative_eq!(a.rho, b.rho, epsilon = 1e-14);
    assert_relative_eq!(a.c, b.c, epsilon = 1e-14);
}

#[test]
fn gamma_range_is_validated() {
    assert!(GasParams::new(1.0, 2.0, 0.9).is_err());
    assert!(GasParams::new(1.0, 2.0, 3.5).is_err());
    assert!(GasParams::new_unrestricted(1.0, 2.0, 3.5).is_ok());
    assert!(GasParams::new(-1.0, 2.0, 2.0).is_err());
    assert!(GasParams::new(1.0, f64::NAN, 2.0).is_err());
    assert!(matches!(GasParams::new(1.0, 1.0, 2.0), Err(Error::NoCompression { .. })));
}

#[test]
fn bernoulli_constant_is_consistent() {
    let g = GasParams::new(1.3, 2.0, 1.4).unwrap();
    assert_relative_eq!(g.a0(), (g.gamma - 1.0) * g.bernoulli + 1.0, epsilon = 1e-15);
}

fn gas() -> impl Strategy<Value = GasParams> {
    (0.2f64..5.0, 1.01f64..3.0).prop_map(|(rho0, gamma)| GasParams::new(rho0, 2.0 * rho0, gamma).unwrap())
}

proptest! {
    #[test]
    fn density_decreases_with_speed_and_potential(g in gas(), q in 0.0f64..0.5, dq in 0.01f64..0.5, phi in -1.0f64..0.0) {
        let faster = density(q + dq, phi, &g);
        prop_assume!(faster.is_ok());
        let base = density(q, phi, &g).unwrap();
        prop_assert!(faster.unwrap() < base);
        if let Ok(r) = density(q, phi + dq, &g) {
            prop_assert!(r < base);
        }
    }

    #[test]
    fn sound_speed_squared_is_the_closure_base(g in gas(), q in 0.0f64..0.5, phi in -1.0f64..0.0) {
        let rho = density(q, phi, &g);
        prop_assume!(rho.is_ok());
        let rho = rho.unwrap();
        let c = sound_speed(rho, &g).unwrap();
        let base = g.a0() - (g.gamma - 1.0) * (phi + 0.5 * q);
        prop_assert!((c * c - base).abs() <= 1e-12 * base.max(1.0));
    }

    #[test]
    fn uniform_state_density_is_the_same_everywhere(
        g in gas(), u in -1.0f64..1.0, v in -1.0f64..1.0, k in -1.0f64..0.0,
        x in -3.0f64..3.0, y in -3.0f64..3.0,
    ) {
        let st = UniformState::new(u, v, k, &g);
        prop_assume!(st.is_ok());
        let st = st.unwrap();
        let xi = Vec2::new(x, y);
        let (phi, grad) = uniform_potential(&st, xi);
        let rho = density(grad.norm_squared(), phi, &g).unwrap();
        prop_assert!((rho - st.rho).abs() <= 1e-10 * st.rho.max(1.0));
        prop_assert_eq!(st.grad(Vec2::new(u, v)), Vec2::zeros());
    }

    #[test]
    fn margin_sign_matches_the_local_mach_number(g in gas(), q in 0.0f64..2.0, phi in -1.0f64..0.0) {
        let grad = Vec2::new(q, 0.0);
        if let Ok(rho) = density(q * q, phi, &g) {
            let c = sound_speed(rho, &g).unwrap();
            let m = ellipticity_margin(grad, phi, &g).unwrap();
            if (q - c).abs() > 1e-9 {
                prop_assert_eq!(m > 0.0, q < c);
            }
        }
    }
}
