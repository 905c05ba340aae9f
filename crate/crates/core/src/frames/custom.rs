//! Frames built around a single world line from a family of Lorentz maps
//! `H(s)` with `H(s)ṙ(0) = ṙ(s)`, optionally twisted by `e^{sΓ}`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::frames::FrameField;
use crate::minkowski::{boost_derivative, boost_unchecked, dot, exp_generator, projector_unchecked, wedge, LinMap4, Vec4};
use crate::transport::FermiWalkerPropagator;
use crate::worldline::{orthogonal_time, WorldLine};

/// Number of grid intervals used to tabulate Fermi-Walker transport over the curve's domain.
const FW_TABLE_INTERVALS: f64 = 16384.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TransportVariant {
    /// `H(s)` is the pure boost from `ṙ(0)` to `ṙ(s)`.
    Boost,
    /// `H(s)` is Fermi-Walker transport from `0` to `s`.
    FermiWalker,
}

impl TransportVariant {
    pub fn name(self) -> &'static str {
        match self {
            TransportVariant::Boost => "boost",
            TransportVariant::FermiWalker => "fermi_walker",
        }
    }
}

impl fmt::Display for TransportVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TransportVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "boost" => Ok(TransportVariant::Boost),
            "fermi_walker" | "fw" => Ok(TransportVariant::FermiWalker),
            other => Err(Error::InvalidArgument(format!("unknown transport variant '{other}'"))),
        }
    }
}

/// `U(x) = V(x)/|V(x)|` with `V(x) = ṙ(s) + Ḣ_Γ(s)H_Γ(s)⁻¹(x − r(s))`, `s = s(x)`.
#[derive(Clone)]
pub struct CustomFrame {
    worldline: Arc<dyn WorldLine>,
    variant: TransportVariant,
    gamma: LinMap4,
    initial_velocity: Vec4,
    fermi_walker: Option<FermiWalkerPropagator>,
}

impl fmt::Debug for CustomFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomFrame")
            .field("variant", &self.variant)
            .field("gamma", &self.gamma)
            .field("initial_velocity", &self.initial_velocity)
            .finish()
    }
}

/// Builds the frame around `r`; `gamma` must be antisymmetric with `Γṙ(0) = 0`.
pub fn make_custom_frame(
    r: Arc<dyn WorldLine>,
    variant: TransportVariant,
    gamma: LinMap4,
) -> Result<CustomFrame> {
    gamma.check_antisymmetric(1e-12)?;
    let u0 = r.velocity(0.0);
    if gamma.apply(u0).max_abs() > 1e-10 * (1.0 + gamma.norm()) {
        return Err(Error::InvalidArgument("Γ must annihilate the initial velocity".into()));
    }
    let fermi_walker = match variant {
        TransportVariant::FermiWalker => {
            let (lo, hi) = r.domain();
            let step = (hi - lo) / FW_TABLE_INTERVALS;
            Some(FermiWalkerPropagator::new(r.clone(), lo.min(0.0), hi.max(0.0), step)?)
        }
        TransportVariant::Boost => None,
    };
    Ok(CustomFrame { worldline: r, variant, gamma, initial_velocity: u0, fermi_walker })
}

impl CustomFrame {
    pub fn worldline(&self) -> &dyn WorldLine {
        self.worldline.as_ref()
    }

    pub fn variant(&self) -> TransportVariant {
        self.variant
    }

    pub fn gamma(&self) -> &LinMap4 {
        &self.gamma
    }

    /// The untwisted family `H(s)`.
    pub fn base_operator(&self, s: f64) -> Result<LinMap4> {
        match &self.fermi_walker {
            Some(prop) => prop.eval(s),
            None => Ok(boost_unchecked(self.initial_velocity, self.worldline.velocity(s))),
        }
    }

    /// `Ḣ(s)H(s)⁻¹` of the untwisted family.
    pub fn base_generator(&self, s: f64) -> LinMap4 {
        let r = self.worldline.as_ref();
        match self.variant {
            TransportVariant::FermiWalker => wedge(r.velocity(s), r.acceleration(s)),
            TransportVariant::Boost => {
                let w = r.velocity(s);
                let b_dot = boost_derivative(self.initial_velocity, w, r.acceleration(s));
                b_dot * boost_unchecked(w, self.initial_velocity)
            }
        }
    }

    /// `H_Γ(s) = H(s)e^{sΓ}`.
    pub fn transport_operator(&self, s: f64) -> Result<LinMap4> {
        Ok(self.base_operator(s)? * exp_generator(&self.gamma, s))
    }

    /// `Ḣ_Γ H_Γ⁻¹ = ḢH⁻¹ + HΓH⁻¹`.
    pub fn generator(&self, s: f64) -> Result<LinMap4> {
        let base = self.base_generator(s);
        if self.gamma.max_abs() == 0.0 {
            return Ok(base);
        }
        let h = self.base_operator(s)?;
        Ok(base + h * self.gamma * h.adjoint())
    }

    /// Angular velocity on the curve, `P(s)ḢH⁻¹P(s) + HΓH⁻¹`.
    pub fn angular_velocity_analytic(&self, s: f64) -> Result<LinMap4> {
        let p = projector_unchecked(self.worldline.velocity(s));
        let mut w = p * self.base_generator(s) * p;
        if self.gamma.max_abs() != 0.0 {
            let h = self.base_operator(s)?;
            w = w + h * self.gamma * h.adjoint();
        }
        Ok(w)
    }
}

/// Angular velocity of the custom frame at `r(s)` from the closed-form family generator.
pub fn custom_frame_angular_velocity_analytic(f: &CustomFrame, s: f64) -> Result<LinMap4> {
    f.angular_velocity_analytic(s)
}

impl CustomFrame {
    // dG/ds by a five-point stencil.
    fn generator_rate(&self, s: f64) -> Result<LinMap4> {
        let h = GENERATOR_STEP * (1.0 + s.abs());
        let g = |k: f64| self.generator(s + k * h);
        Ok((g(-2.0)? - g(-1.0)?.scale(8.0) + g(1.0)?.scale(8.0) - g(2.0)?).scale(1.0 / (12.0 * h)))
    }

    fn unnormalized(&self, x: Vec4) -> Result<(f64, Vec4, LinMap4)> {
        let r = self.worldline.as_ref();
        let s = orthogonal_time(r, x)?;
        let g = self.generator(s)?;
        let v = r.velocity(s) + g.apply(x - r.position(s));
        let n = dot(v, v);
        if n >= 0.0 {
            return Err(Error::FrameDomain(format!("V(x) is not timelike (V·V = {n:.3e})")));
        }
        Ok((s, v, g))
    }
}

const GENERATOR_STEP: f64 = 1e-3;

impl FrameField for CustomFrame {
    fn velocity(&self, x: Vec4) -> Result<Vec4> {
        let (_, v, _) = self.unnormalized(x)?;
        Ok(v * (1.0 / (-dot(v, v)).sqrt()))
    }

    /// `DV = (r̈ + Ġd − Gṙ) ⊗ ∇s + G` with `d = x − r(s)` and
    /// `∇s = −ṙ/(1 + d·r̈)`, then `DU = DV/|V| + V ⊗ (DV*V)/|V|³`.
    fn jacobian(&self, x: Vec4) -> Result<LinMap4> {
        let r = self.worldline.as_ref();
        let (s, v, g) = self.unnormalized(x)?;
        let d = x - r.position(s);
        let (u, acc) = (r.velocity(s), r.acceleration(s));
        let denom = 1.0 + dot(d, acc);
        let mut along = acc - g.apply(u);
        if d.max_abs() != 0.0 {
            along += self.generator_rate(s)?.apply(d);
        }
        let dv = LinMap4::outer(along, u).scale(-1.0 / denom) + g;
        let norm = (-dot(v, v)).sqrt();
        Ok(dv.scale(1.0 / norm) + LinMap4::outer(v, dv.adjoint().apply(v)).scale(1.0 / norm.powi(3)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::{angular_velocity, rigidity_residual};
    use crate::minkowski::rotation_generator;
    use crate::worldline::lab_circular_orbit;

    fn orbit() -> Arc<dyn WorldLine> {
        Arc::new(lab_circular_orbit(1.0, 0.5).unwrap())
    }

    #[test]
    fn on_curve_velocity_is_tangent() {
        let r = orbit();
        for variant in [TransportVariant::Boost, TransportVariant::FermiWalker] {
            let f = make_custom_frame(r.clone(), variant, LinMap4::zero()).unwrap();
            for s in [0.0, 0.9, 4.0] {
                let u = f.velocity(r.position(s)).unwrap();
                assert!((u - r.velocity(s)).max_abs() < 1e-12);
            }
        }
    }

    #[test]
    fn fermi_walker_variant_does_not_rotate() {
        let r = orbit();
        let f = make_custom_frame(r.clone(), TransportVariant::FermiWalker, LinMap4::zero()).unwrap();
        for s in [0.0, 1.3, 3.7] {
            assert!(f.angular_velocity_analytic(s).unwrap().max_abs() < 1e-14);
            let w = angular_velocity(&f, r.position(s)).unwrap();
            assert!(w.max_abs() < 1e-7, "{}", w.max_abs());
            assert!(rigidity_residual(&f, r.position(s)).unwrap() < 1e-6 || w.norm() < 1e-7);
        }
    }

    #[test]
    fn analytic_jacobian_matches_finite_differences() {
        let r = orbit();
        let u0 = r.velocity(0.0);
        let gamma = rotation_generator(u0, Vec4::e_z() * 0.2).unwrap();
        for (variant, gamma) in [
            (TransportVariant::Boost, LinMap4::zero()),
            (TransportVariant::FermiWalker, LinMap4::zero()),
            (TransportVariant::Boost, gamma),
        ] {
            let f = make_custom_frame(r.clone(), variant, gamma).unwrap();
            for (s, off) in [(0.3, Vec4::new(0.0, 0.05, 0.0, 0.1)), (2.2, Vec4::new(0.01, -0.1, 0.05, -0.2))] {
                let x = r.position(s) + off;
                let analytic = f.jacobian(x).unwrap();
                let fd = crate::frames::finite_difference_jacobian(&|y| f.velocity(y), x).unwrap();
                assert!((analytic - fd).max_abs() < 1e-7, "{variant}: {}", (analytic - fd).max_abs());
            }
        }
    }

    #[test]
    fn boost_generator_matches_numeric_derivative() {
        let r = orbit();
        let f = make_custom_frame(r.clone(), TransportVariant::Boost, LinMap4::zero()).unwrap();
        let s = 1.1;
        let h = 1e-5;
        let d = (f.base_operator(s + h).unwrap() - f.base_operator(s - h).unwrap()).scale(0.5 / h);
        let numeric = d * f.base_operator(s).unwrap().adjoint();
        assert!((numeric - f.base_generator(s)).max_abs() < 1e-8);
    }

    #[test]
    fn boost_generator_closed_form() {
        let r = orbit();
        let f = make_custom_frame(r.clone(), TransportVariant::Boost, LinMap4::zero()).unwrap();
        let u0 = r.velocity(0.0);
        for s in [0.0, 0.7, 2.0, 5.0] {
            let (u, a) = (r.velocity(s), r.acceleration(s));
            let k = 1.0 / (1.0 - dot(u, u0));
            assert!((f.base_generator(s) - wedge(u + u0, a).scale(k)).norm() < 1e-13);
            let w = f.angular_velocity_analytic(s).unwrap();
            assert!((w - wedge(u0 + u * dot(u, u0), a).scale(k)).norm() < 1e-13);
        }
    }

    #[test]
    fn twisted_frame_rotates_by_gamma_at_start() {
        let r = orbit();
        let u0 = r.velocity(0.0);
        let gamma = rotation_generator(u0, Vec4::e_z() * 0.3).unwrap();
        let f = make_custom_frame(r.clone(), TransportVariant::FermiWalker, gamma).unwrap();
        assert!((f.angular_velocity_analytic(0.0).unwrap() - gamma).max_abs() < 1e-14);
    }

    #[test]
    fn gamma_must_fix_initial_velocity() {
        let bad = rotation_generator(Vec4::e_t(), Vec4::e_z() * 0.3).unwrap();
        assert!(make_custom_frame(orbit(), TransportVariant::Boost, bad).is_err());
    }

    #[test]
    fn far_points_are_outside_domain() {
        let r = orbit();
        let f = make_custom_frame(r.clone(), TransportVariant::Boost, LinMap4::zero()).unwrap();
        assert!(f.velocity(r.position(0.0) + Vec4::new(0.0, 50.0, 0.0, 0.0)).is_err());
    }
}
