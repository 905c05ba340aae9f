use proptest::prelude::*;

use relkin::frames::{make_rotating_profile, rigidity_residual, FrameField, ProfileKind, RotatingFrame};
use relkin::minkowski::{boost, dot, exp_generator, projector, rest_space_basis, rotation_generator, wedge};
use relkin::precession::{thomas_rotation, thomas_rotation_with_triad};
use relkin::transport::integrate_flow;
use relkin::worldline::{lab_circular_orbit, orthogonal_time, WorldLine};
use relkin::{LinMap4, Vec4};

fn velocity() -> impl Strategy<Value = Vec4> {
    (-0.5..0.5f64, -0.5..0.5f64, -0.5..0.5f64).prop_map(|(x, y, z)| Vec4::four_velocity(x, y, z).unwrap())
}

fn vector() -> impl Strategy<Value = Vec4> {
    prop::array::uniform4(-2.0..2.0f64).prop_map(Vec4::from_array)
}

fn close(a: &LinMap4, b: &LinMap4, tol: f64) -> bool {
    (*a - *b).max_abs() < tol
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn boost_is_isometry_taking_u_to_u2(u in velocity(), u2 in velocity()) {
        let b = boost(u, u2).unwrap();
        prop_assert!((b.apply(u) - u2).max_abs() < 1e-12);
        prop_assert!(b.isometry_residual() < 1e-12);
        prop_assert!((b.determinant() - 1.0).abs() < 1e-10);
        prop_assert!(close(&b.compose(&boost(u2, u).unwrap()), &LinMap4::identity(), 1e-12));
    }

    #[test]
    fn boost_to_self_is_identity(u in velocity()) {
        prop_assert!(close(&boost(u, u).unwrap(), &LinMap4::identity(), 1e-13));
    }

    #[test]
    fn projector_is_idempotent_and_kills_u(u in velocity(), w in vector()) {
        let p = projector(u).unwrap();
        prop_assert!(close(&p.compose(&p), &p, 1e-12));
        prop_assert!(p.apply(u).max_abs() < 1e-12);
        prop_assert!(dot(p.apply(w), u).abs() < 1e-11);
    }

    #[test]
    fn wedge_is_antisymmetric(x in vector(), y in vector()) {
        let m = wedge(x, y);
        prop_assert!(m.antisymmetry_residual() < 1e-12);
        prop_assert!(close(&wedge(y, x), &(-m), 1e-14));
    }

    #[test]
    fn exp_of_generator_is_isometric_one_parameter_group(
        x in vector(), y in vector(), s in -1.5..1.5f64, t in -1.5..1.5f64,
    ) {
        let a = wedge(x, y);
        let es = exp_generator(&a, s);
        prop_assert!(es.isometry_residual() < 1e-9 * (1.0 + es.norm().powi(2)));
        let lhs = es.compose(&exp_generator(&a, t));
        let rhs = exp_generator(&a, s + t);
        prop_assert!(close(&lhs, &rhs, 1e-9 * (1.0 + rhs.norm())));
    }

    #[test]
    fn rotation_generator_fixes_u(u in velocity(), axis in prop::array::uniform3(-1.0..1.0f64)) {
        let e = rest_space_basis(u).unwrap();
        let g = rotation_generator(u, e[0] * axis[0] + e[1] * axis[1] + e[2] * axis[2]).unwrap();
        prop_assert!(g.apply(u).max_abs() < 1e-12);
        prop_assert!(g.antisymmetry_residual() < 1e-12);
    }

    #[test]
    fn conventional_profile_solves_the_rigidity_equations(k in 0.0..0.95f64) {
        let p = make_rotating_profile(ProfileKind::Conventional, 1.0).unwrap();
        let (ra, rb) = p.ode_residual(k).unwrap();
        prop_assert!(ra.abs() < 1e-12 && rb.abs() < 1e-12);
    }

    #[test]
    fn conventional_frame_is_rigid(r in 0.05..0.9f64, phi in 0.0..std::f64::consts::TAU, z in -1.0..1.0f64, t in -3.0..3.0f64) {
        let f = RotatingFrame::in_lab(make_rotating_profile(ProfileKind::Conventional, 1.0).unwrap(), 1.0).unwrap();
        let x = Vec4::new(t, r * phi.cos(), r * phi.sin(), z);
        prop_assert!(rigidity_residual(&f, x).unwrap() < 1e-8);
    }

    #[test]
    fn orthogonal_time_puts_point_in_rest_space(s0 in 0.0..6.0f64, off in prop::array::uniform3(-0.2..0.2f64)) {
        let orbit = lab_circular_orbit(1.0, 0.5).unwrap();
        let x = orbit.position(s0) + Vec4::new(0.0, off[0], off[1], off[2]);
        let s = orthogonal_time(&orbit, x).unwrap();
        prop_assert!(dot(x - orbit.position(s), orbit.velocity(s)).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn flow_is_a_semigroup(r in 0.1..0.8f64, t1 in 0.1..1.5f64, t2 in 0.1..1.5f64) {
        let f = RotatingFrame::in_lab(make_rotating_profile(ProfileKind::TrocherisTakeno, 1.0).unwrap(), 1.0).unwrap();
        let x = Vec4::new(0.0, r, 0.0, 0.3);
        let h = 1e-3;
        let two = integrate_flow(&f, integrate_flow(&f, x, t1, h).unwrap(), t2, h).unwrap();
        let one = integrate_flow(&f, x, t1 + t2, h).unwrap();
        prop_assert!((two - one).max_abs() < 1e-9);
        prop_assert!((dot(f.velocity(one).unwrap(), f.velocity(one).unwrap()) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn thomas_angle_does_not_depend_on_the_triad(v in 0.1..0.8f64, angle in 0.0..std::f64::consts::TAU) {
        let orbit = lab_circular_orbit(1.0, v).unwrap();
        let s_t = orbit.period();
        let step = s_t / 1024.0;
        let u0 = orbit.velocity(0.0);
        let [e1, e2, e3] = rest_space_basis(u0).unwrap();
        let (c, s) = (angle.cos(), angle.sin());
        let turned = [e1 * c + e2 * s, e2 * c - e1 * s, e3];
        let a = thomas_rotation(&orbit, s_t, step).unwrap();
        let b = thomas_rotation_with_triad(&orbit, s_t, step, turned).unwrap();
        prop_assert!((a.angle - b.angle).abs() < 1e-9);
        prop_assert!(close(&a.rotation, &b.rotation, 1e-9));
    }
}
