use crate::error::{Error, Result};
use crate::frames::profile::{ProfileValues, RotatingProfile};
use crate::frames::FrameField;
use crate::minkowski::{dot, wedge, LinMap4, Vec4, UNIT_TOL};
use crate::worldline::CircularOrbit;

/// Uniformly rotating frame `U(x) = α(k)u + β(k)Ω(x − o)` with `k = |Ω(x − o)|²`.
#[derive(Clone, Copy, Debug)]
pub struct RotatingFrame {
    pub center: Vec4,
    pub axis_velocity: Vec4,
    pub generator: LinMap4,
    pub profile: RotatingProfile,
}

impl RotatingFrame {
    pub fn new(center: Vec4, axis_velocity: Vec4, generator: LinMap4, profile: RotatingProfile) -> Result<Self> {
        axis_velocity.check_four_velocity(UNIT_TOL)?;
        generator.check_antisymmetric(1e-12)?;
        if generator.apply(axis_velocity).max_abs() > 1e-12 * (1.0 + generator.norm()) {
            return Err(Error::InvalidArgument("generator must annihilate the axis velocity".into()));
        }
        Ok(RotatingFrame { center, axis_velocity, generator, profile })
    }

    /// Frame centred on the lab origin, rotating counter-clockwise in the x-y plane at rate `omega`.
    pub fn in_lab(profile: RotatingProfile, omega: f64) -> Result<Self> {
        Self::new(Vec4::zero(), Vec4::e_t(), wedge(Vec4::e_y(), Vec4::e_x()).scale(omega), profile)
    }

    /// `k(x) = |Ω(x − o)|²`.
    pub fn k(&self, x: Vec4) -> f64 {
        let t = self.generator.apply(x - self.center);
        dot(t, t)
    }

    fn profile_at(&self, x: Vec4) -> Result<(Vec4, ProfileValues)> {
        let tangential = self.generator.apply(x - self.center);
        let k = dot(tangential, tangential);
        Ok((tangential, self.profile.eval(k)?))
    }

    /// The space point through `x0`: the circular world line
    /// `s ↦ o + s·α·u + e^{s·β·Ω}(x0 − o)`.
    pub fn space_point(&self, x0: Vec4) -> Result<CircularOrbit> {
        let (_, p) = self.profile_at(x0)?;
        CircularOrbit::with_coefficients(
            self.center,
            self.axis_velocity,
            self.generator,
            x0 - self.center,
            p.alpha,
            p.beta,
        )
    }
}

impl FrameField for RotatingFrame {
    fn velocity(&self, x: Vec4) -> Result<Vec4> {
        let (tangential, p) = self.profile_at(x)?;
        Ok(self.axis_velocity * p.alpha + tangential * p.beta)
    }

    fn jacobian(&self, x: Vec4) -> Result<LinMap4> {
        let (tangential, p) = self.profile_at(x)?;
        let centripetal = self.generator.apply(tangential);
        let radial = self.axis_velocity * p.alpha_prime + tangential * p.beta_prime;
        Ok(LinMap4::outer(radial, centripetal).scale(-2.0) + self.generator.scale(p.beta))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::{
        angular_velocity, finite_difference_jacobian, make_rotating_profile, rigidity_residual, ProfileKind,
    };
    use crate::worldline::WorldLine;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn frame(kind: ProfileKind, a: f64) -> RotatingFrame {
        RotatingFrame::in_lab(make_rotating_profile(kind, a).unwrap(), 1.0).unwrap()
    }

    #[test]
    fn axis_point_moves_with_center() {
        let f = frame(ProfileKind::Conventional, 1.0);
        assert_eq!(f.velocity(Vec4::new(3.0, 0.0, 0.0, 0.0)).unwrap(), Vec4::e_t());
    }

    #[test]
    fn conventional_velocity_on_ring() {
        let f = frame(ProfileKind::Conventional, 1.0);
        let u = f.velocity(Vec4::new(0.0, 0.5, 0.0, 0.0)).unwrap();
        let g = 1.1547005383792517;
        assert!((u - Vec4::new(g, 0.0, 0.5 * g, 0.0)).max_abs() < 1e-14);
        assert_abs_diff_eq!(dot(u, u), -1.0, epsilon = 1e-14);
    }

    #[test]
    fn analytic_jacobian_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for kind in [
            ProfileKind::Conventional,
            ProfileKind::TrocherisTakeno,
            ProfileKind::Modified,
            ProfileKind::ConstantA,
        ] {
            let f = frame(kind, if kind == ProfileKind::ConstantA { 2.0 } else { 1.0 });
            for _ in 0..20 {
                let r = rng.random_range(0.1..0.6);
                let th = rng.random_range(0.0..std::f64::consts::TAU);
                let x = Vec4::new(rng.random_range(-2.0..2.0), r * th.cos(), r * th.sin(), rng.random_range(-1.0..1.0));
                let analytic = f.jacobian(x).unwrap();
                let fd = finite_difference_jacobian(&|y| f.velocity(y), x).unwrap();
                let rel = (analytic - fd).norm() / analytic.norm();
                assert!(rel < 1e-6, "{kind}: {rel}");
            }
        }
    }

    #[test]
    fn velocity_gradient_is_orthogonal_to_velocity() {
        let f = frame(ProfileKind::TrocherisTakeno, 1.0);
        let x = Vec4::new(0.2, 0.3, -0.2, 0.4);
        let u = f.velocity(x).unwrap();
        let du = f.jacobian(x).unwrap();
        for j in 0..4 {
            assert!(dot(u, du.apply(Vec4::basis(j))).abs() < 1e-12);
        }
    }

    #[test]
    fn rigidity_split() {
        let x = Vec4::new(0.0, 0.5, 0.0, 0.0);
        assert!(rigidity_residual(&frame(ProfileKind::Conventional, 1.0), x).unwrap() < 1e-12);
        assert!(rigidity_residual(&frame(ProfileKind::TrocherisTakeno, 1.0), x).unwrap() > 1e-2);
    }

    #[test]
    fn rigid_angular_velocity_is_projected_jacobian() {
        let f = frame(ProfileKind::Conventional, 1.5);
        let x = Vec4::new(0.4, 0.1, 0.3, -0.2);
        let u = f.velocity(x).unwrap();
        let p = crate::minkowski::projector(u).unwrap();
        let w = angular_velocity(&f, x).unwrap();
        assert!((w - p * f.jacobian(x).unwrap() * p).max_abs() < 1e-12);
        assert!(w.antisymmetry_residual() < 1e-12);
    }

    #[test]
    fn space_point_is_integral_curve() {
        let f = frame(ProfileKind::TrocherisTakeno, 1.0);
        let orbit = f.space_point(Vec4::new(0.0, 0.5, 0.0, 0.0)).unwrap();
        for s in [0.0, 0.7, 3.1] {
            let mismatch = (f.velocity(orbit.position(s)).unwrap() - orbit.velocity(s)).max_abs();
            assert!(mismatch < 1e-13);
        }
    }

    #[test]
    fn outside_domain_is_rejected() {
        let f = frame(ProfileKind::Conventional, 1.0);
        assert!(f.velocity(Vec4::new(0.0, 1.0, 0.0, 0.0)).is_err());
    }
}
