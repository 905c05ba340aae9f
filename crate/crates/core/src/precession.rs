//! Foucault precession relative to a co-moving frame and Thomas rotation at
//! return times.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::frames::{angular_velocity_from, make_custom_frame, rigidity_residual_from, FrameField, TransportVariant};
use crate::minkowski::{boost_unchecked, dot, rest_space_basis, rotation_angle, rotation_generator, signed_angle, LinMap4, Vec4};
use crate::transport::{fermi_walker_trajectory, integrate_lie_transport, GyroState, LieTransport};
use crate::worldline::{CircularOrbit, WorldLine};

/// Largest antisymmetry residual of `Ω0` for which Foucault precession counts as meaningful.
pub const MEANINGFUL_TOL: f64 = 1e-6;
/// Largest accepted `|ṙ(s_T) − ṙ(0)|` at a return time.
pub const RETURN_TOL: f64 = 1e-8;
/// Threshold on the condition-e residual below which the two angles must agree.
pub const CONDITION_E_TOL: f64 = 1e-6;
/// Agreement required between the two angles when condition e holds.
pub const ANGLE_MATCH_TOL: f64 = 1e-5;

const MAX_SAMPLES: usize = 1024;

/// Foucault precession of gyroscopes carried along a space point of a frame.
#[derive(Clone, Debug)]
pub struct PrecessionReport {
    pub meaningful: bool,
    /// Largest `‖Ω0 + Ω0*‖` over all grid points.
    pub antisymmetry_residual: f64,
    /// `Ω0(s) = −A⁻¹Ȧ` restricted to the initial rest space.
    pub omega0_samples: Vec<(f64, LinMap4)>,
    /// `Ω(s) = AΩ0A⁻¹`; empty when the precession is not meaningful.
    pub omega_samples: Vec<(f64, LinMap4)>,
    /// Frame angular velocity `½P(DU − DU*)P` on the curve.
    pub frame_angvel_samples: Vec<(f64, LinMap4)>,
    /// Largest rigidity residual of the frame along the curve.
    pub rigidity_residual: f64,
    pub transport: LieTransport,
}

/// Builds the report from an existing Lie transport run.
pub fn precession_from_transport(transport: LieTransport) -> PrecessionReport {
    let n = transport.len();
    let stride = n.div_ceil(MAX_SAMPLES).max(1);
    let mut antisymmetry_residual: f64 = 0.0;
    let mut rigidity_residual: f64 = 0.0;
    let mut omega0_samples = Vec::new();
    let mut frame_angvel_samples = Vec::new();
    for i in 0..n {
        let st = &transport.states[i];
        let omega0 = transport.omega0(i) * st.p0;
        antisymmetry_residual = antisymmetry_residual.max(omega0.antisymmetry_residual());
        rigidity_residual = rigidity_residual.max(rigidity_residual_from(st.u, &st.jacobian));
        if i % stride == 0 || i == n - 1 {
            omega0_samples.push((st.s, omega0));
            frame_angvel_samples.push((st.s, angular_velocity_from(st.u, &st.jacobian)));
        }
    }
    let meaningful = antisymmetry_residual < MEANINGFUL_TOL;
    let omega_samples = if meaningful {
        (0..n)
            .filter(|i| i % stride == 0 || *i == n - 1)
            .map(|i| (transport.states[i].s, transport.omega(i)))
            .collect()
    } else {
        Vec::new()
    };
    PrecessionReport {
        meaningful,
        antisymmetry_residual,
        omega0_samples,
        omega_samples,
        frame_angvel_samples,
        rigidity_residual,
        transport,
    }
}

/// Lie transport along `r` from 0 to `s_max` and the resulting Foucault precession.
pub fn foucault_precession(f: &dyn FrameField, r: &dyn WorldLine, s_max: f64, step: f64) -> Result<PrecessionReport> {
    Ok(precession_from_transport(integrate_lie_transport(f, r, s_max, step)?))
}

/// Frame-space representative of a gyroscope along the curve.
#[derive(Clone, Debug)]
pub struct GyroTrack {
    /// `z` is Fermi-Walker transported, `h0` solves `ḣ0 = −A⁻¹Ȧ h0`.
    pub states: Vec<GyroState>,
    /// Largest `|h0 − A⁻¹z|` over the track.
    pub two_route_residual: f64,
}

/// Integrates `ḣ0 = −(A⁻¹Ȧ)h0`, `h0(0) = z0`, and cross-checks it against `A⁻¹z`.
pub fn integrate_gyro_in_frame(
    f: &dyn FrameField,
    r: &dyn WorldLine,
    z0: Vec4,
    s_max: f64,
    step: f64,
) -> Result<GyroTrack> {
    let report = foucault_precession(f, r, s_max, step)?;
    gyro_from_report(&report, r, z0)
}

/// [`integrate_gyro_in_frame`] on an existing report.
pub fn gyro_from_report(report: &PrecessionReport, r: &dyn WorldLine, z0: Vec4) -> Result<GyroTrack> {
    if !report.meaningful {
        return Err(Error::NotMeaningful { residual: report.antisymmetry_residual });
    }
    let lt = &report.transport;
    let s_max = lt.final_state().s;
    let z = fermi_walker_trajectory(r, z0, s_max, lt.step)?;
    debug_assert_eq!(z.len(), lt.len());
    let omega0: Vec<LinMap4> = (0..lt.len()).map(|i| lt.omega0(i)).collect();
    // RK4 over pairs of grid intervals so every stage lands on a stored point.
    let big = 2.0 * lt.step;
    let mut h0 = z0;
    let mut states = Vec::with_capacity(lt.len() / 2 + 1);
    let mut residual: f64 = 0.0;
    let mut i = 0;
    loop {
        let route = lt.states[i].a_inv.apply(z[i].z);
        residual = residual.max((h0 - route).max_abs());
        states.push(GyroState { s: lt.states[i].s, z: z[i].z, h0: Some(h0) });
        if i + 2 >= lt.len() {
            break;
        }
        let k1 = omega0[i].apply(h0);
        let k2 = omega0[i + 1].apply(h0 + k1 * (0.5 * big));
        let k3 = omega0[i + 1].apply(h0 + k2 * (0.5 * big));
        let k4 = omega0[i + 2].apply(h0 + k3 * big);
        h0 += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (big / 6.0);
        i += 2;
    }
    Ok(GyroTrack { states, two_route_residual: residual })
}

fn check_return(r: &dyn WorldLine, s_t: f64) -> Result<()> {
    let mismatch = (r.velocity(s_t) - r.velocity(0.0)).max_abs();
    if mismatch > RETURN_TOL {
        return Err(Error::ReturnConditionViolated { mismatch });
    }
    Ok(())
}

// Unit vector of the initial rest space orthogonal to `axis`.
fn in_plane_vector(u0: Vec4, axis: Vec4) -> Result<Vec4> {
    let basis = rest_space_basis(u0)?;
    let n = axis * (1.0 / axis.magnitude());
    let pick = basis
        .iter()
        .copied()
        .min_by(|a, b| dot(*a, n).abs().total_cmp(&dot(*b, n).abs()))
        .expect("three basis vectors");
    let w = pick - n * dot(n, pick);
    Ok(w * (1.0 / w.magnitude()))
}

// Orientation axis projected into the initial rest space; falls back to `fallback`, then to a basis vector.
fn orientation(r: &dyn WorldLine, fallback: Option<Vec4>) -> Result<Vec4> {
    let u0 = r.velocity(0.0);
    let candidate = r.orientation_axis().or(fallback);
    if let Some(n) = candidate {
        let p = n + u0 * dot(u0, n);
        if dot(p, p) > 1e-20 {
            return Ok(p * (1.0 / p.magnitude()));
        }
    }
    Ok(rest_space_basis(u0)?[2])
}

/// Sum of signed angle increments about `axis` along a sequence of vectors in the initial rest space.
fn accumulated_angle(u0: Vec4, axis: Vec4, path: impl Iterator<Item = Vec4>) -> f64 {
    let mut total = 0.0;
    let mut prev: Option<Vec4> = None;
    for w in path {
        if let Some(p) = prev {
            total += signed_angle(u0, axis, p, w);
        }
        prev = Some(w);
    }
    total
}

/// Thomas rotation of a gyroscope over `[0, s_T]`.
#[derive(Clone, Copy, Debug)]
pub struct ThomasRotation {
    pub s_t: f64,
    /// Principal angle in `[0, π]`.
    pub angle: f64,
    pub axis: Option<Vec4>,
    /// The map `z_i(0) ↦ z_i(s_T)` extended by `ṙ(0) ↦ ṙ(0)`.
    pub rotation: LinMap4,
    /// Accumulated angle about `orientation`, positive in the sense of the orbit's rotation.
    pub unwrapped_angle: f64,
    pub orientation: Vec4,
    pub retrograde: bool,
}

/// Thomas rotation with the chart-derived triad of the initial rest space.
pub fn thomas_rotation(r: &dyn WorldLine, s_t: f64, step: f64) -> Result<ThomasRotation> {
    let triad = rest_space_basis(r.velocity(0.0))?;
    thomas_rotation_with_triad(r, s_t, step, triad)
}

/// Thomas rotation using the given orthonormal triad of `E_{ṙ(0)}`.
pub fn thomas_rotation_with_triad(r: &dyn WorldLine, s_t: f64, step: f64, triad: [Vec4; 3]) -> Result<ThomasRotation> {
    check_return(r, s_t)?;
    let u0 = r.velocity(0.0);
    let mut rotation = -LinMap4::outer(u0, u0);
    for z0 in triad {
        let z = fermi_walker_trajectory(r, z0, s_t, step)?.last().expect("non-empty trajectory").z;
        rotation = rotation + LinMap4::outer(z, z0);
    }
    let principal = rotation_angle(&rotation, u0)?;
    let axis = orientation(r, principal.axis)?;
    let z0 = in_plane_vector(u0, axis)?;
    let path = fermi_walker_trajectory(r, z0, s_t, step)?;
    let unwrapped_angle = accumulated_angle(
        u0,
        axis,
        path.iter().map(|g| boost_unchecked(r.velocity(g.s), u0).apply(g.z)),
    );
    Ok(ThomasRotation {
        s_t,
        angle: principal.angle,
        axis: principal.axis,
        rotation,
        unwrapped_angle,
        orientation: axis,
        retrograde: unwrapped_angle < 0.0,
    })
}

/// Whether the Foucault and Thomas angles coincide at the return time.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Match,
    Mismatch,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Match => "match",
            Verdict::Mismatch => "mismatch",
        }
    }
}

/// Foucault angle against Thomas angle at a return time.
#[derive(Clone, Copy, Debug)]
pub struct RotationComparison {
    pub s_t: f64,
    /// Principal angles from the cosine formulas, in `[0, π]`.
    pub thomas_angle: f64,
    pub foucault_angle: f64,
    /// Signed accumulated angles about the orbit's orientation.
    pub thomas_angle_unwrapped: f64,
    pub foucault_angle_unwrapped: f64,
    /// `‖A(s_T) − N·P(0)‖`.
    pub condition_e_residual: f64,
    /// The natural identification of tangent spaces at `r(0)` and `r(s_T)`.
    pub n: LinMap4,
    pub rigidity_residual: f64,
    pub two_route_residual: f64,
    pub verdict: Verdict,
}

// Angle whose cosine is dot(a, b)/|a|², evaluated through atan2 so it stays
// accurate near 0 and π. Both vectors are spacelike.
fn cos_angle(a: Vec4, b: Vec4) -> f64 {
    let aa = dot(a, a);
    let c = dot(a, b) / aa;
    let perp = b - a * c;
    (dot(perp, perp).max(0.0).sqrt() / aa.sqrt()).atan2(c)
}

/// Compares the integrated Foucault precession with the Thomas rotation over `[0, s_T]`.
pub fn compare_foucault_vs_thomas(f: &dyn FrameField, r: &dyn WorldLine, s_t: f64, step: f64) -> Result<RotationComparison> {
    check_return(r, s_t)?;
    let report = foucault_precession(f, r, s_t, step)?;
    compare_from_report(&report, r)
}

/// [`compare_foucault_vs_thomas`] on an existing report.
pub fn compare_from_report(report: &PrecessionReport, r: &dyn WorldLine) -> Result<RotationComparison> {
    if !report.meaningful {
        return Err(Error::NotMeaningful { residual: report.antisymmetry_residual });
    }
    let lt = &report.transport;
    let last = lt.final_state();
    let s_t = last.s;
    check_return(r, s_t)?;
    let u0 = r.velocity(0.0);
    let axis = orientation(r, None)?;
    let z0 = in_plane_vector(u0, axis)?;
    let track = gyro_from_report(report, r, z0)?;
    let z_end = track.states.last().expect("non-empty track").z;
    let n = LinMap4::identity();
    let n_inv = n;

    let thomas_angle = cos_angle(z0, n_inv.apply(z_end));
    let foucault_angle = cos_angle(z0, last.a_inv.apply(z_end));
    let z_path = fermi_walker_trajectory(r, z0, s_t, lt.step)?;
    let thomas_angle_unwrapped = accumulated_angle(
        u0,
        axis,
        z_path.iter().map(|g| boost_unchecked(r.velocity(g.s), u0).apply(g.z)),
    );
    let foucault_angle_unwrapped = accumulated_angle(
        u0,
        axis,
        z_path.iter().zip(&lt.states).map(|(g, st)| st.a_inv.apply(g.z)),
    );
    let condition_e_residual = (last.a - n * last.p0).norm();
    let verdict = if condition_e_residual < CONDITION_E_TOL && (thomas_angle - foucault_angle).abs() < ANGLE_MATCH_TOL {
        Verdict::Match
    } else {
        Verdict::Mismatch
    };
    Ok(RotationComparison {
        s_t,
        thomas_angle,
        foucault_angle,
        thomas_angle_unwrapped,
        foucault_angle_unwrapped,
        condition_e_residual,
        n,
        rigidity_residual: report.rigidity_residual,
        two_route_residual: track.two_route_residual,
        verdict,
    })
}

/// Angular velocities of several frames sharing one space point.
#[derive(Clone, Debug)]
pub struct WorldlineAngularVelocityDemo {
    /// Proper time at which the frames are compared.
    pub s: f64,
    /// `(label, angular velocity at r(0), angular velocity at r(s))`.
    pub entries: Vec<(&'static str, LinMap4, LinMap4)>,
    /// Smallest pairwise difference norm at `r(s)`.
    pub min_pairwise_difference: f64,
}

/// Builds boost, Fermi-Walker and twisted-boost frames around the same
/// circular orbit and reports their angular velocities on it.
///
/// The comparison point is a quarter period in, since the untwisted boost and
/// Fermi-Walker frames both have zero angular velocity at `r(0)`.
pub fn angular_velocity_of_worldline_is_undefined_demo(r: &CircularOrbit) -> Result<WorldlineAngularVelocityDemo> {
    let s_t = r.period();
    let s = 0.25 * s_t;
    let line: Arc<dyn WorldLine> = Arc::new(*r);
    let u0 = r.velocity(0.0);
    let axis = orientation(r, None)?;
    let gamma = rotation_generator(u0, axis * (1.0 / s_t))?;
    let frames = [
        ("boost", make_custom_frame(line.clone(), TransportVariant::Boost, LinMap4::zero())?),
        ("fermi_walker", make_custom_frame(line.clone(), TransportVariant::FermiWalker, LinMap4::zero())?),
        ("boost_gamma", make_custom_frame(line, TransportVariant::Boost, gamma)?),
    ];
    let mut entries = Vec::new();
    for (label, frame) in &frames {
        entries.push((*label, frame.angular_velocity_analytic(0.0)?, frame.angular_velocity_analytic(s)?));
    }
    let mut min_pairwise_difference = f64::INFINITY;
    for i in 0..entries.len() {
        for j in i + 1..entries.len() {
            min_pairwise_difference = min_pairwise_difference.min((entries[i].2 - entries[j].2).norm());
        }
    }
    Ok(WorldlineAngularVelocityDemo { s, entries, min_pairwise_difference })
}
