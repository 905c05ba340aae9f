//! Proper-time parameterized world lines.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::minkowski::{dot, exp_generator, wedge, LinMap4, Vec4, UNIT_TOL};

/// A timelike curve parameterized by proper time, with analytic derivatives.
pub trait WorldLine: Send + Sync {
    fn position(&self, s: f64) -> Vec4;
    fn velocity(&self, s: f64) -> Vec4;
    fn acceleration(&self, s: f64) -> Vec4;

    /// Proper-time interval on which the curve is used.
    fn domain(&self) -> (f64, f64);

    /// A starting guess for [`orthogonal_time`] near `x`, when the curve knows one.
    fn orthogonal_time_hint(&self, _x: Vec4) -> Option<f64> {
        None
    }

    /// Fixed spatial axis used to orient accumulated rotation angles.
    fn orientation_axis(&self) -> Option<Vec4> {
        None
    }
}

/// Straight world line `o + s u`.
#[derive(Clone, Copy, Debug)]
pub struct InertialLine {
    pub origin: Vec4,
    pub u: Vec4,
    pub domain: (f64, f64),
}

impl InertialLine {
    pub fn new(origin: Vec4, u: Vec4) -> Result<Self> {
        u.check_four_velocity(UNIT_TOL)?;
        Ok(InertialLine { origin, u, domain: (-10.0, 10.0) })
    }
}

impl WorldLine for InertialLine {
    fn position(&self, s: f64) -> Vec4 {
        self.origin + self.u * s
    }
    fn velocity(&self, _s: f64) -> Vec4 {
        self.u
    }
    fn acceleration(&self, _s: f64) -> Vec4 {
        Vec4::zero()
    }
    fn domain(&self) -> (f64, f64) {
        self.domain
    }
    fn orthogonal_time_hint(&self, x: Vec4) -> Option<f64> {
        Some(-dot(x - self.origin, self.u))
    }
}

type CurveFn = Box<dyn Fn(f64) -> Vec4 + Send + Sync>;

/// A world line given by user-supplied closures for the point and its first
/// two derivatives. The closures must be mutually consistent.
pub struct AnalyticWorldLine {
    position: CurveFn,
    velocity: CurveFn,
    acceleration: CurveFn,
    domain: (f64, f64),
}

impl AnalyticWorldLine {
    pub fn new(
        position: impl Fn(f64) -> Vec4 + Send + Sync + 'static,
        velocity: impl Fn(f64) -> Vec4 + Send + Sync + 'static,
        acceleration: impl Fn(f64) -> Vec4 + Send + Sync + 'static,
        domain: (f64, f64),
    ) -> Self {
        AnalyticWorldLine {
            position: Box::new(position),
            velocity: Box::new(velocity),
            acceleration: Box::new(acceleration),
            domain,
        }
    }
}

impl fmt::Debug for AnalyticWorldLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticWorldLine").field("domain", &self.domain).finish()
    }
}

impl WorldLine for AnalyticWorldLine {
    fn position(&self, s: f64) -> Vec4 {
        (self.position)(s)
    }
    fn velocity(&self, s: f64) -> Vec4 {
        (self.velocity)(s)
    }
    fn acceleration(&self, s: f64) -> Vec4 {
        (self.acceleration)(s)
    }
    fn domain(&self) -> (f64, f64) {
        self.domain
    }
}

/// Uniform circular motion `r(s) = o + s·a·u + e^{s·b·Ω}(x0 − o)`.
///
/// `Ω` is a spatial rotation generator of rate `ω` in the rest space of `u`
/// and `a² − b²|Ω(x0 − o)|² = 1`. The orbit built by
/// [`make_circular_orbit`] has `a = b = γ`; the space points of a rotating
/// frame have `a = α(k)`, `b = β(k)`.
#[derive(Clone, Copy, Debug)]
pub struct CircularOrbit {
    pub center: Vec4,
    pub center_velocity: Vec4,
    pub generator: LinMap4,
    pub offset: Vec4,
    pub time_coeff: f64,
    pub phase_coeff: f64,
    omega: f64,
    axis: Vec4,
    domain: (f64, f64),
}

impl CircularOrbit {
    /// General constructor; `offset = x0 − o`.
    pub fn with_coefficients(
        center: Vec4,
        center_velocity: Vec4,
        generator: LinMap4,
        offset: Vec4,
        time_coeff: f64,
        phase_coeff: f64,
    ) -> Result<Self> {
        center_velocity.check_four_velocity(UNIT_TOL)?;
        generator.check_antisymmetric(1e-12)?;
        if generator.apply(center_velocity).max_abs() > 1e-12 * (1.0 + generator.norm()) {
            return Err(Error::InvalidArgument("generator must annihilate the center velocity".into()));
        }
        let tangential = generator.apply(offset);
        let k = dot(tangential, tangential);
        let norm = time_coeff * time_coeff - phase_coeff * phase_coeff * k;
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "coefficients violate a² − b²|Ω(x0−o)|² = 1 (got {norm})"
            )));
        }
        let omega = generator.rotation_rate();
        let axis = axis_of(center_velocity, &generator, omega);
        let mut orbit = CircularOrbit {
            center,
            center_velocity,
            generator,
            offset,
            time_coeff,
            phase_coeff,
            omega,
            axis,
            domain: (0.0, 0.0),
        };
        let period = orbit.period();
        orbit.domain = if period.is_finite() { (-period, 2.0 * period) } else { (-10.0, 10.0) };
        Ok(orbit)
    }

    pub fn with_domain(mut self, lo: f64, hi: f64) -> Self {
        self.domain = (lo, hi);
        self
    }

    /// Rotation rate `ω` of the generator.
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Lab speed of the orbiting point relative to the center.
    pub fn speed(&self) -> f64 {
        let t = self.generator.apply(self.offset);
        self.phase_coeff * dot(t, t).sqrt() / self.time_coeff
    }

    /// Lorentz factor relative to the center, equal to the time coefficient.
    pub fn gamma(&self) -> f64 {
        self.time_coeff
    }

    /// `γ − 1` without cancellation at low speed.
    pub fn gamma_minus_one(&self) -> f64 {
        let v2 = self.speed().powi(2);
        let root = (1.0 - v2).sqrt();
        v2 / (root * (1.0 + root))
    }

    /// Proper time of one revolution, `2π/(bω)`; infinite for a non-rotating line.
    pub fn period(&self) -> f64 {
        2.0 * PI / (self.phase_coeff * self.omega)
    }

    fn rotation(&self, s: f64) -> LinMap4 {
        exp_generator(&self.generator, s * self.phase_coeff)
    }
}

// Unit axis n with Ω w = ω n × w in the rest space of u.
fn axis_of(u: Vec4, generator: &LinMap4, omega: f64) -> Vec4 {
    if omega == 0.0 {
        return Vec4::zero();
    }
    let Ok(basis) = crate::minkowski::rest_space_basis(u) else {
        return Vec4::zero();
    };
    let c = |i: usize, j: usize| dot(basis[i], generator.apply(basis[j]));
    let n = basis[0] * c(2, 1) + basis[1] * c(0, 2) + basis[2] * c(1, 0);
    n * (1.0 / omega)
}

impl WorldLine for CircularOrbit {
    fn position(&self, s: f64) -> Vec4 {
        self.center + self.center_velocity * (s * self.time_coeff) + self.rotation(s).apply(self.offset)
    }

    fn velocity(&self, s: f64) -> Vec4 {
        let rotated = self.rotation(s).apply(self.offset);
        self.center_velocity * self.time_coeff + self.generator.apply(rotated) * self.phase_coeff
    }

    fn acceleration(&self, s: f64) -> Vec4 {
        let rotated = self.rotation(s).apply(self.offset);
        let b = self.phase_coeff;
        self.generator.apply(self.generator.apply(rotated)) * (b * b)
    }

    fn domain(&self) -> (f64, f64) {
        self.domain
    }

    fn orthogonal_time_hint(&self, x: Vec4) -> Option<f64> {
        let lab = -dot(x - self.center - self.offset, self.center_velocity);
        Some(lab / self.time_coeff)
    }

    fn orientation_axis(&self) -> Option<Vec4> {
        (self.omega > 0.0).then_some(self.axis)
    }
}

/// Circular orbit around the center line `o + u·t`, starting at
/// `o + radius·p1` and rotating from `p1` towards `p2` at lab rate `omega`.
pub fn make_circular_orbit(
    o: Vec4,
    u: Vec4,
    rotation_plane: (Vec4, Vec4),
    omega: f64,
    radius: f64,
) -> Result<CircularOrbit> {
    u.check_four_velocity(UNIT_TOL)?;
    let (p1, p2) = rotation_plane;
    let checks = [
        dot(p1, p1) - 1.0,
        dot(p2, p2) - 1.0,
        dot(p1, p2),
        dot(p1, u),
        dot(p2, u),
    ];
    if checks.iter().any(|c| c.abs() > 1e-10) {
        return Err(Error::InvalidArgument(
            "rotation plane must be spanned by orthonormal vectors orthogonal to u".into(),
        ));
    }
    if omega < 0.0 || radius < 0.0 || !omega.is_finite() || !radius.is_finite() {
        return Err(Error::InvalidArgument("omega and radius must be non-negative".into()));
    }
    let v = omega * radius;
    if v >= 1.0 {
        return Err(Error::Superluminal { speed: v });
    }
    let gamma = 1.0 / (1.0 - v * v).sqrt();
    let generator = wedge(p2, p1).scale(omega);
    CircularOrbit::with_coefficients(o, u, generator, p1 * radius, gamma, gamma)
}

/// Circular orbit about the lab origin in the x-y plane, counter-clockwise.
pub fn lab_circular_orbit(omega: f64, radius: f64) -> Result<CircularOrbit> {
    make_circular_orbit(Vec4::zero(), Vec4::e_t(), (Vec4::e_x(), Vec4::e_y()), omega, radius)
}

/// First proper time after 0 at which the orbit's velocity returns to its initial value.
pub fn return_time(orbit: &CircularOrbit) -> f64 {
    orbit.period()
}

const SCAN_SAMPLES: usize = 512;
const MAX_NEWTON: usize = 50;
const RESIDUAL_TOL: f64 = 1e-12;
const MIN_DENOMINATOR: f64 = 0.1;

fn orthogonality(r: &dyn WorldLine, x: Vec4, s: f64) -> f64 {
    dot(x - r.position(s), r.velocity(s))
}

/// Newton iteration for `dot(x − r(s), ṙ(s)) = 0` starting at `s0`.
pub fn orthogonal_time_from(r: &dyn WorldLine, x: Vec4, s0: f64) -> Result<f64> {
    let mut s = s0;
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_NEWTON {
        let d = x - r.position(s);
        residual = dot(d, r.velocity(s));
        let denom = 1.0 + dot(d, r.acceleration(s));
        if denom < MIN_DENOMINATOR {
            return Err(Error::Singularity { denominator: denom });
        }
        let ds = residual / denom;
        s -= ds;
        if ds.abs() <= 4.0 * f64::EPSILON * (1.0 + s.abs()) {
            let final_residual = orthogonality(r, x, s);
            if final_residual.abs() < RESIDUAL_TOL {
                return Ok(s);
            }
            residual = final_residual;
            break;
        }
    }
    if residual.abs() < RESIDUAL_TOL {
        return Ok(s);
    }
    Err(Error::NoConvergence { iterations: MAX_NEWTON, residual })
}

/// Proper time `s(x)` of the point of `r` whose rest space contains `x`.
///
/// Uses the curve's own hint when it has one, otherwise a bracket scan over
/// the domain (see [`orthogonal_time_scan`]).
pub fn orthogonal_time(r: &dyn WorldLine, x: Vec4) -> Result<f64> {
    if let Some(hint) = r.orthogonal_time_hint(x) {
        if let Ok(s) = orthogonal_time_from(r, x, hint) {
            return Ok(s);
        }
    }
    orthogonal_time_scan(r, x)
}

/// Scans the whole domain for sign changes of `dot(x − r(s), ṙ(s))`; more than
/// one bracket is reported as non-uniqueness.
pub fn orthogonal_time_scan(r: &dyn WorldLine, x: Vec4) -> Result<f64> {
    let (lo, hi) = r.domain();
    let h = (hi - lo) / SCAN_SAMPLES as f64;
    let mut brackets = Vec::new();
    let mut prev = orthogonality(r, x, lo);
    if prev == 0.0 {
        brackets.push((lo, lo));
    }
    for i in 1..=SCAN_SAMPLES {
        let s = lo + i as f64 * h;
        let cur = orthogonality(r, x, s);
        if cur == 0.0 || (prev < 0.0 && cur > 0.0) || (prev > 0.0 && cur < 0.0) {
            brackets.push((s - h, s));
        }
        prev = cur;
    }
    match brackets.len() {
        0 => Err(Error::NoRoot),
        1 => {
            let (a, b) = brackets[0];
            refine_in_bracket(r, x, a, b)
        }
        n => Err(Error::NonUniqueRoot { count: n }),
    }
}

fn refine_in_bracket(r: &dyn WorldLine, x: Vec4, mut a: f64, mut b: f64) -> Result<f64> {
    let fa = orthogonality(r, x, a);
    if fa == 0.0 {
        return Ok(a);
    }
    // bisect until Newton is safe, then polish
    for _ in 0..30 {
        let m = 0.5 * (a + b);
        let fm = orthogonality(r, x, m);
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
        } else {
            b = m;
        }
        if b - a < 1e-6 {
            break;
        }
    }
    orthogonal_time_from(r, x, 0.5 * (a + b))
}

/// Gradient of `s(x)` as a vector (index raised with the metric), from
/// the implicit-function formula `−ṙ / (1 + (x − r)·r̈)`.
pub fn orthogonal_time_gradient(r: &dyn WorldLine, x: Vec4) -> Result<Vec4> {
    let s = orthogonal_time(r, x)?;
    let denom = 1.0 + dot(x - r.position(s), r.acceleration(s));
    if denom < MIN_DENOMINATOR {
        return Err(Error::Singularity { denominator: denom });
    }
    Ok(r.velocity(s) * (-1.0 / denom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn circular_velocity_at_start() {
        let orbit = lab_circular_orbit(1.0, 0.5).unwrap();
        let v = orbit.velocity(0.0);
        let g = 1.1547005383792517;
        assert_abs_diff_eq!(v.t(), g, epsilon = 1e-12);
        assert_abs_diff_eq!(v.x(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v.y(), g * 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(v.z(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn unit_velocity_and_orthogonal_acceleration() {
        let orbit = lab_circular_orbit(1.3, 0.6).unwrap();
        for i in 0..100 {
            let s = -3.0 + 0.07 * i as f64;
            let v = orbit.velocity(s);
            assert_abs_diff_eq!(dot(v, v), -1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(dot(v, orbit.acceleration(s)), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn zero_radius_is_inertial() {
        let orbit = lab_circular_orbit(1.0, 0.0).unwrap();
        for s in [0.0, 1.0, 7.5] {
            assert!((orbit.position(s) - Vec4::e_t() * s).max_abs() < 1e-15);
        }
    }

    #[test]
    fn superluminal_rejected() {
        assert_eq!(lab_circular_orbit(2.0, 0.6).unwrap_err(), Error::Superluminal { speed: 1.2 });
        assert!(lab_circular_orbit(1.0, 1.0).is_err());
    }

    #[test]
    fn bad_plane_rejected() {
        let r = make_circular_orbit(Vec4::zero(), Vec4::e_t(), (Vec4::e_x(), Vec4::e_x()), 1.0, 0.5);
        assert!(matches!(r, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn return_time_matches_closed_form() {
        let orbit = lab_circular_orbit(1.0, 0.5).unwrap();
        let st = return_time(&orbit);
        // 2π / γ with γ = 1/√0.75
        assert_abs_diff_eq!(st, 5.441398092702653, epsilon = 1e-12);
        assert!((orbit.velocity(st) - orbit.velocity(0.0)).max_abs() < 1e-12);
        let slow = lab_circular_orbit(1.0, 1e-6).unwrap();
        assert_abs_diff_eq!(return_time(&slow), 2.0 * PI, epsilon = 1e-10);
    }

    #[test]
    fn axis_follows_rotation_sense() {
        let orbit = lab_circular_orbit(1.0, 0.5).unwrap();
        let n = orbit.orientation_axis().unwrap();
        assert!((n - Vec4::e_z()).max_abs() < 1e-14);
    }

    #[test]
    fn orthogonal_time_on_curve() {
        let orbit = lab_circular_orbit(1.0, 0.5).unwrap();
        for sigma in [0.0, 0.3, 2.0, 5.0] {
            let s = orthogonal_time(&orbit, orbit.position(sigma)).unwrap();
            assert_abs_diff_eq!(s, sigma, epsilon = 1e-12);
            let scanned = orthogonal_time_scan(&orbit, orbit.position(sigma)).unwrap();
            assert_abs_diff_eq!(scanned, sigma, epsilon = 1e-12);
        }
    }

    #[test]
    fn orthogonal_displacement_keeps_time() {
        let orbit = lab_circular_orbit(1.0, 0.5).unwrap();
        let sigma = 1.1;
        let p = crate::minkowski::projector(orbit.velocity(sigma)).unwrap();
        let q = p.apply(Vec4::new(0.3, 0.02, -0.03, 0.05));
        let s = orthogonal_time_scan(&orbit, orbit.position(sigma) + q).unwrap();
        assert_abs_diff_eq!(s, sigma, epsilon = 1e-12);
    }

    #[test]
    fn beyond_curvature_horizon_is_singular() {
        // radial displacement of 1/|r̈| towards the outside makes the denominator vanish
        let orbit = lab_circular_orbit(1.0, 0.5).unwrap();
        let a = orbit.acceleration(0.0);
        let outward = a * (-1.0 / dot(a, a));
        let err = orthogonal_time_from(&orbit, orbit.position(0.0) + outward * 0.95, 0.0);
        assert!(matches!(err, Err(Error::Singularity { .. })));
    }

    #[test]
    fn inertial_line_hint_is_exact() {
        let u = Vec4::four_velocity(0.3, 0.1, 0.0).unwrap();
        let line = InertialLine::new(Vec4::new(1.0, 2.0, 0.0, 0.0), u).unwrap();
        let x = line.position(2.5) + Vec4::new(0.0, 0.0, 0.0, 1.0);
        assert_abs_diff_eq!(orthogonal_time(&line, x).unwrap(), 2.5, epsilon = 1e-12);
    }

    #[test]
    fn scan_reports_missing_root() {
        let line = InertialLine { origin: Vec4::zero(), u: Vec4::e_t(), domain: (0.0, 1.0) };
        assert_eq!(orthogonal_time_scan(&line, Vec4::e_t() * 5.0), Err(Error::NoRoot));
    }
}
