//! Property tests for the structural invariants: group parametrization
//! round trips, gamma-function functional equations, and the symmetry of
//! the hyperspherical functions under randomized indices and angles.

use hyperspherical::funcs::{hyper_z, hyper_z_factored};
use hyperspherical::group::{
    compose_euler, euler_to_group, group_compose, group_to_euler, ComplexEulerAngles, GroupElement,
};
use hyperspherical::halfint::HalfInt;
use hyperspherical::special::{cgamma, near_nonpos_int, rgamma, C64};
use proptest::prelude::*;
use std::f64::consts::PI;

fn angles_strategy(imag: f64) -> impl Strategy<Value = ComplexEulerAngles> {
    (
        0.0..2.0 * PI,
        -imag..imag,
        0.02..PI - 0.02,
        -imag..imag,
        -2.0 * PI..2.0 * PI,
        -imag..imag,
    )
        .prop_map(|(phi, eps, theta, tau, psi, veps)| {
            ComplexEulerAngles::new(phi, eps, theta, tau, psi, veps)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn determinant_is_one(a in angles_strategy(3.0)) {
        let g = euler_to_group(&a);
        prop_assert!((g.det() - 1.0).norm() < 1e-12);
    }

    #[test]
    fn matrix_round_trip(a in angles_strategy(1.0)) {
        let g = euler_to_group(&a);
        let back = euler_to_group(&group_to_euler(&g).angles);
        prop_assert!(back.max_entry_distance(&g) < 1e-9);
    }

    #[test]
    fn composition_is_associative(
        a in angles_strategy(0.8),
        b in angles_strategy(0.8),
        c in angles_strategy(0.8),
    ) {
        let ab_c = compose_euler(&compose_euler(&a, &b).angles, &c).angles;
        let a_bc = compose_euler(&a, &compose_euler(&b, &c).angles).angles;
        let d = euler_to_group(&ab_c).max_entry_distance(&euler_to_group(&a_bc));
        prop_assert!(d < 1e-9, "associativity defect {}", d);
    }

    #[test]
    fn inverse_composes_to_identity(a in angles_strategy(1.5)) {
        let g = euler_to_group(&a);
        let id = group_compose(&g, &g.inverse());
        prop_assert!(id.max_entry_distance(&GroupElement::IDENTITY) < 1e-12);
    }

    #[test]
    fn gamma_recurrence(re in -10.0..10.0f64, im in -10.0..10.0f64) {
        let z = C64::new(re, im);
        prop_assume!(!near_nonpos_int(z, 1e-3) && !near_nonpos_int(z + 1.0, 1e-3));
        let lhs = cgamma(z + 1.0).unwrap();
        let rhs = z * cgamma(z).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-11 * rhs.norm().max(1e-300));
    }

    #[test]
    fn reciprocal_gamma_inverts(re in -10.0..10.0f64, im in -10.0..10.0f64) {
        let z = C64::new(re, im);
        prop_assume!(!near_nonpos_int(z, 1e-3));
        let p = rgamma(z) * cgamma(z).unwrap();
        prop_assert!((p - 1.0).norm() < 1e-11);
    }

    #[test]
    fn hyperspherical_symmetries(
        twice_l in 0i64..=6,
        theta in 0.0..PI,
        tau in -2.0..2.0f64,
    ) {
        let l = HalfInt::from_twice(twice_l);
        for m in HalfInt::weights(l) {
            for n in HalfInt::weights(l) {
                let z = hyper_z(l, m, n, theta, tau).unwrap();
                let neg = hyper_z(l, -m, -n, theta, tau).unwrap();
                let swap = hyper_z(l, n, m, theta, tau).unwrap();
                let fact = hyper_z_factored(l, m, n, theta, tau).unwrap();
                prop_assert!((z - neg).norm() < 1e-11);
                prop_assert!((z - swap).norm() < 1e-11);
                prop_assert!((z - fact).norm() < 1e-10);
            }
        }
    }
}
