//! Transport of vectors along world lines: Lie transport by the flow of a
//! frame, spacelike Lie transport between rest spaces, and Fermi-Walker
//! transport of gyroscopic vectors.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frames::{FrameField, TransportVariant};
use crate::minkowski::{boost, dot, projector_unchecked, wedge, LinMap4, Vec4};
use crate::ode::{rk4_integrate, rk4_step, rk4_trajectory, step_count};
use crate::worldline::WorldLine;

/// Tolerance on `|U(r(σ)) − ṙ(σ)|` for a curve to count as an integral curve.
pub const INTEGRAL_CURVE_TOL: f64 = 1e-8;
/// Largest accepted change of `L(s)` when the step is halved.
pub const STEP_HALVING_TOL: f64 = 1e-6;

const INTEGRAL_CURVE_SAMPLES: usize = 16;

/// Lie transport data at one proper time.
#[derive(Clone, Copy, Debug)]
pub struct TransportState {
    pub s: f64,
    /// `ṙ(s)`.
    pub u: Vec4,
    /// `L(s) = DR_s(x0)`.
    pub l: LinMap4,
    /// `A(s) = P(s) L(s) P(0)`.
    pub a: LinMap4,
    /// `A(s)⁻¹ = P(0) L(s)⁻¹ P(s)`.
    pub a_inv: LinMap4,
    pub p0: LinMap4,
    pub ps: LinMap4,
    /// `DU(r(s))`, the frame Jacobian on the curve.
    pub jacobian: LinMap4,
}

/// A gyroscopic vector and, when a frame is involved, its frame-space representative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GyroState {
    pub s: f64,
    pub z: Vec4,
    pub h0: Option<Vec4>,
}

/// Lie transport sampled on a uniform proper-time grid starting at 0.
#[derive(Clone, Debug)]
pub struct LieTransport {
    pub states: Vec<TransportState>,
    pub step: f64,
}

impl LieTransport {
    pub fn final_state(&self) -> &TransportState {
        self.states.last().expect("transport always holds the initial state")
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// `Ȧ` at grid index `i` by five-point differences on the stored grid.
    pub fn a_dot(&self, i: usize) -> LinMap4 {
        let n = self.states.len();
        let a = |j: usize| self.states[j].a;
        let h = self.step;
        if n < 5 {
            if n < 2 {
                return LinMap4::zero();
            }
            let (lo, hi) = (i.saturating_sub(1), (i + 1).min(n - 1));
            return (a(hi) - a(lo)).scale(1.0 / ((hi - lo) as f64 * h));
        }
        let c = 1.0 / (12.0 * h);
        match i {
            0 => (a(0) * -25.0 + a(1) * 48.0 - a(2) * 36.0 + a(3) * 16.0 - a(4) * 3.0) * c,
            1 => (a(0) * -3.0 - a(1) * 10.0 + a(2) * 18.0 - a(3) * 6.0 + a(4)) * c,
            _ if i == n - 2 => {
                (a(n - 1) * 3.0 + a(n - 2) * 10.0 - a(n - 3) * 18.0 + a(n - 4) * 6.0 - a(n - 5)) * c
            }
            _ if i == n - 1 => {
                (a(n - 1) * 25.0 - a(n - 2) * 48.0 + a(n - 3) * 36.0 - a(n - 4) * 16.0 + a(n - 5) * 3.0) * c
            }
            _ => (a(i - 2) - a(i - 1) * 8.0 + a(i + 1) * 8.0 - a(i + 2)) * c,
        }
    }

    /// `Ω0(s) = −A⁻¹Ȧ`, a map of the initial rest space.
    pub fn omega0(&self, i: usize) -> LinMap4 {
        -(self.states[i].a_inv * self.a_dot(i))
    }

    /// `Ω(s) = AΩ0A⁻¹ = −P(s)ȦA⁻¹`, a map of the current rest space.
    ///
    /// The projection drops the `ṙ` component that the chart derivative of
    /// `A` picks up from `Ṗ(s)`.
    pub fn omega(&self, i: usize) -> LinMap4 {
        let st = &self.states[i];
        -(st.ps * self.a_dot(i) * st.a_inv)
    }
}

fn check_integral_curve(f: &dyn FrameField, r: &dyn WorldLine, s_max: f64) -> Result<()> {
    for i in 0..=INTEGRAL_CURVE_SAMPLES {
        let s = s_max * i as f64 / INTEGRAL_CURVE_SAMPLES as f64;
        let mismatch = (f.velocity(r.position(s))? - r.velocity(s)).max_abs();
        if mismatch > INTEGRAL_CURVE_TOL {
            return Err(Error::NotIntegralCurve { mismatch, s });
        }
    }
    Ok(())
}

fn check_step(step: f64) -> Result<()> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidArgument(format!("step must be positive, got {step}")));
    }
    Ok(())
}

// RK4 for L' = J(σ) L with J tabulated at the step ends and midpoint.
fn linear_rk4(l: LinMap4, j0: &LinMap4, jm: &LinMap4, j1: &LinMap4, h: f64) -> LinMap4 {
    let k1 = *j0 * l;
    let k2 = *jm * (l + k1.scale(0.5 * h));
    let k3 = *jm * (l + k2.scale(0.5 * h));
    let k4 = *j1 * (l + k3.scale(h));
    l + (k1 + k2.scale(2.0) + k3.scale(2.0) + k4).scale(h / 6.0)
}

/// Integrates `dL/dσ = DU(r(σ)) L`, `L(0) = 1`, up to `s` with fixed-step RK4.
///
/// The run is repeated with half the step; the result is rejected when the
/// two end values differ by more than [`STEP_HALVING_TOL`]. The returned grid
/// is the finer one.
pub fn integrate_lie_transport(
    f: &dyn FrameField,
    r: &dyn WorldLine,
    s: f64,
    step: f64,
) -> Result<LieTransport> {
    check_step(step)?;
    if s < 0.0 {
        return Err(Error::InvalidArgument("transport runs forward from s = 0".into()));
    }
    check_integral_curve(f, r, s)?;
    let n = step_count(s, step).max(2);
    let h = s / n as f64;
    let quarter = h / 4.0;
    let jac: Vec<LinMap4> = (0..=4 * n)
        .into_par_iter()
        .map(|j| f.jacobian(r.position(j as f64 * quarter)))
        .collect::<Result<_>>()?;

    let mut coarse = LinMap4::identity();
    for i in 0..n {
        coarse = linear_rk4(coarse, &jac[4 * i], &jac[4 * i + 2], &jac[4 * i + 4], h);
    }

    let p0 = projector_unchecked(r.velocity(0.0));
    let fine_h = 0.5 * h;
    let mut states = Vec::with_capacity(2 * n + 1);
    let mut l = LinMap4::identity();
    for i in 0..=2 * n {
        if i > 0 {
            l = linear_rk4(l, &jac[2 * i - 2], &jac[2 * i - 1], &jac[2 * i], fine_h);
        }
        let si = i as f64 * fine_h;
        let u = r.velocity(si);
        let ps = projector_unchecked(u);
        let l_inv = l
            .inverse()
            .ok_or_else(|| Error::InvalidArgument(format!("Lie transport became singular at s = {si}")))?;
        states.push(TransportState {
            s: si,
            u,
            l,
            a: ps * l * p0,
            a_inv: p0 * l_inv * ps,
            p0,
            ps,
            jacobian: jac[2 * i],
        });
    }
    let change = (coarse - l).max_abs();
    if change > STEP_HALVING_TOL {
        return Err(Error::StepRejected { change });
    }
    Ok(LieTransport { states, step: fine_h })
}

/// `R_t(x)` by RK4 on `dx/dτ = U(x)`.
pub fn integrate_flow(f: &dyn FrameField, x: Vec4, t: f64, step: f64) -> Result<Vec4> {
    check_step(step)?;
    let rhs = |_tau: f64, y: Vec4| f.velocity(y);
    rk4_integrate(&rhs, 0.0, x, t, step)
}

fn fermi_walker_generator(r: &dyn WorldLine, s: f64) -> LinMap4 {
    wedge(r.velocity(s), r.acceleration(s))
}

fn check_orthogonal(r: &dyn WorldLine, z0: Vec4) -> Result<()> {
    let d = dot(z0, r.velocity(0.0));
    if d.abs() > 1e-10 * (1.0 + z0.chart_norm()) {
        return Err(Error::NotOrthogonal { dot: d });
    }
    Ok(())
}

/// Fermi-Walker transport `ż = (ṙ ∧ r̈) z` of `z0` from 0 to `s`.
pub fn fermi_walker_transport(r: &dyn WorldLine, z0: Vec4, s: f64, step: f64) -> Result<GyroState> {
    check_step(step)?;
    check_orthogonal(r, z0)?;
    let rhs = |sigma: f64, z: Vec4| Ok(fermi_walker_generator(r, sigma).apply(z));
    let z = rk4_integrate(&rhs, 0.0, z0, s, step)?;
    Ok(GyroState { s, z, h0: None })
}

/// Every grid point of [`fermi_walker_transport`].
pub fn fermi_walker_trajectory(r: &dyn WorldLine, z0: Vec4, s: f64, step: f64) -> Result<Vec<GyroState>> {
    check_step(step)?;
    check_orthogonal(r, z0)?;
    let rhs = |sigma: f64, z: Vec4| Ok(fermi_walker_generator(r, sigma).apply(z));
    Ok(rk4_trajectory(&rhs, 0.0, z0, s, step)?
        .into_iter()
        .map(|(s, z)| GyroState { s, z, h0: None })
        .collect())
}

/// The Fermi-Walker transport map from `r(0)` to `r(s)` acting on all vectors.
pub fn fermi_walker_operator(r: &dyn WorldLine, s: f64, step: f64) -> Result<LinMap4> {
    check_step(step)?;
    let rhs = |sigma: f64, m: LinMap4| Ok(fermi_walker_generator(r, sigma) * m);
    rk4_integrate(&rhs, 0.0, LinMap4::identity(), s, step)
}

/// `H(s)`: a Lorentz map carrying `ṙ(0)` to `ṙ(s)`, either the pure boost or
/// Fermi-Walker transport along `r`.
pub fn transport_operator_h(r: &dyn WorldLine, variant: TransportVariant, s: f64, step: f64) -> Result<LinMap4> {
    match variant {
        TransportVariant::Boost => boost(r.velocity(0.0), r.velocity(s)),
        TransportVariant::FermiWalker => fermi_walker_operator(r, s, step),
    }
}

/// Fermi-Walker transport maps tabulated on a grid through `s = 0`; values
/// between nodes take one RK4 step from the nearest node.
#[derive(Clone)]
pub struct FermiWalkerPropagator {
    worldline: Arc<dyn WorldLine>,
    lo: f64,
    step: f64,
    nodes: Vec<LinMap4>,
}

impl std::fmt::Debug for FermiWalkerPropagator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FermiWalkerPropagator")
            .field("lo", &self.lo)
            .field("step", &self.step)
            .field("nodes", &self.nodes.len())
            .finish()
    }
}

impl FermiWalkerPropagator {
    pub fn new(worldline: Arc<dyn WorldLine>, lo: f64, hi: f64, step: f64) -> Result<Self> {
        check_step(step)?;
        if !(lo <= 0.0 && hi >= 0.0) {
            return Err(Error::InvalidArgument("propagator range must contain s = 0".into()));
        }
        let before = (-lo / step).ceil() as usize;
        let after = (hi / step).ceil() as usize;
        let r = worldline.as_ref();
        let rhs = |sigma: f64, m: LinMap4| Ok(fermi_walker_generator(r, sigma) * m);
        let mut nodes = vec![LinMap4::identity(); before + after + 1];
        for i in 0..after {
            let s = i as f64 * step;
            nodes[before + i + 1] = rk4_step(&rhs, s, nodes[before + i], step)?;
        }
        for i in 0..before {
            let s = -(i as f64) * step;
            nodes[before - i - 1] = rk4_step(&rhs, s, nodes[before - i], -step)?;
        }
        Ok(FermiWalkerPropagator { worldline, lo: -(before as f64) * step, step, nodes })
    }

    pub fn range(&self) -> (f64, f64) {
        (self.lo, self.lo + (self.nodes.len() - 1) as f64 * self.step)
    }

    pub fn eval(&self, s: f64) -> Result<LinMap4> {
        let (lo, hi) = self.range();
        if !(s >= lo && s <= hi) {
            return Err(Error::FrameDomain(format!("s = {s} outside tabulated range [{lo}, {hi}]")));
        }
        let k = (((s - lo) / self.step).round() as usize).min(self.nodes.len() - 1);
        let sk = lo + k as f64 * self.step;
        let dt = s - sk;
        if dt == 0.0 {
            return Ok(self.nodes[k]);
        }
        let r = self.worldline.as_ref();
        let rhs = |sigma: f64, m: LinMap4| Ok(fermi_walker_generator(r, sigma) * m);
        rk4_step(&rhs, sk, self.nodes[k], dt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::{InertialFrame, RotatingFrame, RotatingProfile};
    use crate::worldline::{lab_circular_orbit, InertialLine};
    use approx::assert_abs_diff_eq;

    #[test]
    fn inertial_lie_transport_is_trivial() {
        let u = Vec4::four_velocity(0.3, 0.0, 0.2).unwrap();
        let f = InertialFrame::new(u).unwrap();
        let line = InertialLine::new(Vec4::zero(), u).unwrap();
        let lt = integrate_lie_transport(&f, &line, 2.0, 0.01).unwrap();
        let last = lt.final_state();
        assert!((last.l - LinMap4::identity()).max_abs() < 1e-15);
        assert!((last.a - last.p0).max_abs() < 1e-15);
    }

    #[test]
    fn lie_transport_carries_velocity() {
        let f = RotatingFrame::in_lab(RotatingProfile::conventional(), 1.0).unwrap();
        let orbit = f.space_point(Vec4::new(0.0, 0.5, 0.0, 0.0)).unwrap();
        let lt = integrate_lie_transport(&f, &orbit, 2.0, 2.0 / 512.0).unwrap();
        for st in lt.states.iter().step_by(64) {
            let diff = (st.l.apply(orbit.velocity(0.0)) - orbit.velocity(st.s)).max_abs();
            assert!(diff < 1e-10, "{diff}");
            assert!((st.a_inv * st.a - st.p0).max_abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_non_integral_curve() {
        let f = InertialFrame::new(Vec4::e_t()).unwrap();
        let orbit = lab_circular_orbit(1.0, 0.5).unwrap();
        assert!(matches!(
            integrate_lie_transport(&f, &orbit, 1.0, 0.01),
            Err(Error::NotIntegralCurve { .. })
        ));
    }

    #[test]
    fn inertial_flow_is_translation() {
        let u = Vec4::four_velocity(0.1, 0.2, 0.3).unwrap();
        let f = InertialFrame::new(u).unwrap();
        let x = Vec4::new(1.0, 2.0, 3.0, 4.0);
        assert!((integrate_flow(&f, x, 1.5, 0.1).unwrap() - (x + u * 1.5)).max_abs() < 1e-14);
    }

    #[test]
    fn fermi_walker_on_straight_line() {
        let u = Vec4::four_velocity(0.5, 0.0, 0.0).unwrap();
        let line = InertialLine::new(Vec4::zero(), u).unwrap();
        let z0 = Vec4::e_y();
        assert_eq!(fermi_walker_transport(&line, z0, 3.0, 0.1).unwrap().z, z0);
        assert!(matches!(
            fermi_walker_transport(&line, Vec4::e_x(), 1.0, 0.1),
            Err(Error::NotOrthogonal { .. })
        ));
    }

    #[test]
    fn fermi_walker_preserves_orthogonality_and_norm() {
        let orbit = lab_circular_orbit(1.0, 0.5).unwrap();
        let z0 = Vec4::e_x();
        for st in fermi_walker_trajectory(&orbit, z0, orbit.period(), orbit.period() / 2048.0).unwrap() {
            assert_abs_diff_eq!(dot(st.z, st.z), 1.0, epsilon = 1e-11);
            assert_abs_diff_eq!(dot(st.z, orbit.velocity(st.s)), 0.0, epsilon = 1e-11);
        }
    }

    #[test]
    fn h_operators_carry_velocity() {
        let orbit = lab_circular_orbit(1.0, 0.5).unwrap();
        for variant in [TransportVariant::Boost, TransportVariant::FermiWalker] {
            let h0 = transport_operator_h(&orbit, variant, 0.0, 1e-3).unwrap();
            assert!((h0 - LinMap4::identity()).max_abs() < 1e-15);
            let h = transport_operator_h(&orbit, variant, 1.7, 1e-3).unwrap();
            assert!((h.apply(orbit.velocity(0.0)) - orbit.velocity(1.7)).max_abs() < 1e-9);
            assert!(h.isometry_residual() < 1e-10);
        }
    }

    #[test]
    fn propagator_matches_direct_integration() {
        let orbit = Arc::new(lab_circular_orbit(1.0, 0.5).unwrap());
        let prop = FermiWalkerPropagator::new(orbit.clone(), -2.0, 6.0, 1e-3).unwrap();
        for s in [-1.23456, 0.0, 0.5e-3, 2.75, 5.9] {
            let direct = fermi_walker_operator(orbit.as_ref(), s, 1e-3).unwrap();
            assert!((prop.eval(s).unwrap() - direct).max_abs() < 1e-11, "{s}");
        }
        assert!(prop.eval(7.0).is_err());
    }
}
