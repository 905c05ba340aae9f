//! The acceptance suite: eight numbered criteria, each a set of bounded checks.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::frames::{
    finite_difference_jacobian, make_custom_frame, make_rotating_profile, profile_ode_residual, rigidity_residual,
    FrameField, ProfileKind, RotatingFrame, TransportVariant,
};
use crate::minkowski::{dot, exp_generator, rotation_generator, wedge, LinMap4, Vec4};
use crate::precession::{compare_foucault_vs_thomas, foucault_precession, gyro_from_report, thomas_rotation};
use crate::transport::{fermi_walker_operator, integrate_flow, integrate_lie_transport};
use crate::worldline::{lab_circular_orbit, orthogonal_time, CircularOrbit, WorldLine};

/// Steps per orbit used throughout the suite.
pub const STEPS_PER_ORBIT: usize = 4096;

// Trocheris-Takeno ODE residuals at k = 1/4, from cosh/sinh derivatives in
// 40-digit arithmetic.
const TT_RESIDUAL_ALPHA: f64 = -0.182_593_039_049_371_82;
const TT_RESIDUAL_BETA: f64 = -0.790_245_660_351_606_6;

/// How a check compares its measurement with its bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    Below,
    Above,
}

#[derive(Clone, Debug)]
pub struct Check {
    pub label: String,
    pub measured: f64,
    pub bound: Bound,
    pub tolerance: f64,
}

impl Check {
    fn below(label: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Check { label: label.into(), measured, bound: Bound::Below, tolerance }
    }

    fn above(label: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Check { label: label.into(), measured, bound: Bound::Above, tolerance }
    }

    pub fn passed(&self) -> bool {
        match self.bound {
            Bound::Below => self.measured < self.tolerance,
            Bound::Above => self.measured > self.tolerance,
        }
    }

    // Fraction of the allowed range used up; above 1 means failure.
    fn load(&self) -> f64 {
        if self.measured.is_nan() {
            return f64::INFINITY;
        }
        match self.bound {
            Bound::Below => self.measured.abs() / self.tolerance,
            Bound::Above => self.tolerance / self.measured.max(f64::MIN_POSITIVE),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub checks: Vec<Check>,
    pub error: Option<String>,
}

impl CriterionResult {
    pub fn passed(&self) -> bool {
        self.error.is_none() && !self.checks.is_empty() && self.checks.iter().all(Check::passed)
    }

    /// The check closest to (or furthest past) its bound.
    pub fn worst(&self) -> Option<&Check> {
        self.checks.iter().max_by(|a, b| a.load().total_cmp(&b.load()))
    }
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "pass" } else { "fail" };
        write!(f, "criterion={} status={} name={}", self.id, status, self.name)?;
        if let Some(e) = &self.error {
            return write!(f, " error=\"{e}\"");
        }
        if let Some(c) = self.worst() {
            let op = match c.bound {
                Bound::Below => "<",
                Bound::Above => ">",
            };
            write!(
                f,
                " measured={:.6e} expected={op}{:.1e} tolerance={:.1e} check=\"{}\"",
                c.measured, c.tolerance, c.tolerance, c.label
            )?;
        }
        Ok(())
    }
}

/// Settings of a suite run.
#[derive(Clone, Copy, Debug)]
pub struct Options {
    /// Multiplies every upper bound and divides every lower bound.
    pub tolerance_scale: f64,
}

impl Default for Options {
    fn default() -> Self {
        Options { tolerance_scale: 1.0 }
    }
}

pub const CRITERIA: [(u8, &str); 8] = [
    (1, "rigidity_dichotomy"),
    (2, "profile_ode"),
    (3, "thomas_closed_form"),
    (4, "foucault_equals_negative_angular_velocity"),
    (5, "condition_e"),
    (6, "transport_identities"),
    (7, "conservation"),
    (8, "orthogonal_time"),
];

pub fn run_criterion(id: u8, opts: &Options) -> CriterionResult {
    let name = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, n)| *n)
        .unwrap_or("unknown");
    let outcome = match id {
        1 => rigidity_dichotomy(),
        2 => profile_ode(),
        3 => thomas_closed_form(),
        4 => foucault_equivalence(),
        5 => condition_e(),
        6 => transport_identities(),
        7 => conservation(),
        8 => orthogonal_time_checks(),
        _ => Err(crate::Error::InvalidArgument(format!("no criterion {id}"))),
    };
    match outcome {
        Ok(mut checks) => {
            for c in &mut checks {
                match c.bound {
                    Bound::Below => c.tolerance *= opts.tolerance_scale,
                    Bound::Above => c.tolerance /= opts.tolerance_scale,
                }
            }
            CriterionResult { id, name, checks, error: None }
        }
        Err(e) => CriterionResult { id, name, checks: Vec::new(), error: Some(e.to_string()) },
    }
}

/// Runs every criterion, concurrently, returning results in id order.
pub fn run_all(opts: &Options) -> Vec<CriterionResult> {
    CRITERIA.par_iter().map(|(id, _)| run_criterion(*id, opts)).collect()
}

fn rotating(kind: ProfileKind, a: f64) -> Result<RotatingFrame> {
    RotatingFrame::in_lab(make_rotating_profile(kind, a)?, 1.0)
}

/// Points at fixed `k = |Ω(x − o)|²` around the lab axis, with random phase, time and height.
pub fn ring_points(k: f64, count: usize, seed: u64) -> Vec<Vec4> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = k.sqrt();
    (0..count)
        .map(|_| {
            let th = rng.random_range(0.0..2.0 * PI);
            Vec4::new(rng.random_range(-5.0..5.0), r * th.cos(), r * th.sin(), rng.random_range(-2.0..2.0))
        })
        .collect()
}

fn max_rigidity(f: &dyn FrameField, pts: &[Vec4]) -> Result<f64> {
    pts.iter().try_fold(0.0f64, |m, x| Ok(m.max(rigidity_residual(f, *x)?)))
}

fn min_rigidity(f: &dyn FrameField, pts: &[Vec4]) -> Result<f64> {
    pts.iter().try_fold(f64::INFINITY, |m, x| Ok(m.min(rigidity_residual(f, *x)?)))
}

fn rigidity_dichotomy() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for a in [1.0, 1.5] {
        let f = rotating(ProfileKind::Conventional, a)?;
        for v in [0.3, 0.5, 0.8] {
            let k = f.profile.k_for_speed(v).expect("speed below 1");
            let worst = max_rigidity(&f, &ring_points(k, 50, 11))?;
            checks.push(Check::below(format!("conventional a={a} v={v}"), worst, 1e-8));
        }
    }
    for (kind, a) in [
        (ProfileKind::TrocherisTakeno, 1.0),
        (ProfileKind::Modified, 1.0),
        (ProfileKind::ConstantA, 2.0),
    ] {
        let f = rotating(kind, a)?;
        // the constant-a rim speed is fixed, so sample at k = v² instead
        let k = f.profile.k_for_speed(0.5).unwrap_or(0.25);
        let least = min_rigidity(&f, &ring_points(k, 50, 13))?;
        checks.push(Check::above(format!("{} v=0.5", kind.name()), least, 1e-3));
    }
    Ok(checks)
}

fn tt_oracle(k: f64) -> (f64, f64) {
    let r = k.sqrt();
    let (sh, ch) = (r.sinh(), r.cosh());
    let (alpha, beta) = (ch, sh / r);
    let alpha_prime = sh / (2.0 * r);
    let beta_prime = (r * ch - sh) / (2.0 * k * r);
    (2.0 * alpha_prime - alpha * beta * beta, 2.0 * beta_prime - beta * beta * beta)
}

fn profile_ode() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for a in [1.0, 1.5, 2.0] {
        let p = make_rotating_profile(ProfileKind::Conventional, a)?;
        let top = 0.8 / (a * a);
        let mut worst: f64 = 0.0;
        for i in 1..=400 {
            let (ra, rb) = profile_ode_residual(&p, top * i as f64 / 400.0)?;
            worst = worst.max(ra.abs()).max(rb.abs());
        }
        checks.push(Check::below(format!("conventional a={a} residual"), worst, 1e-12));
    }
    let tt = make_rotating_profile(ProfileKind::TrocherisTakeno, 1.0)?;
    let (ra, rb) = profile_ode_residual(&tt, 0.25)?;
    let (oa, ob) = tt_oracle(0.25);
    checks.push(Check::below("tt k=0.25 vs derivative oracle", (ra - oa).abs().max((rb - ob).abs()), 1e-9));
    checks.push(Check::below(
        "tt k=0.25 vs frozen values",
        (ra - TT_RESIDUAL_ALPHA).abs().max((rb - TT_RESIDUAL_BETA).abs()),
        1e-9,
    ));
    checks.push(Check::above("tt k=0.25 residual size", ra.abs().min(rb.abs()), 1e-3));
    Ok(checks)
}

fn thomas_unwrapped(orbit: &CircularOrbit, steps: usize) -> Result<f64> {
    let s_t = orbit.period();
    Ok(thomas_rotation(orbit, s_t, s_t / steps as f64)?.unwrapped_angle.abs())
}

fn thomas_closed_form() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for v in [0.3, 0.5, 0.8] {
        let orbit = lab_circular_orbit(1.0, v)?;
        let exact = 2.0 * PI * orbit.gamma_minus_one();
        let [t1, t2, t4] = [1024, 2048, STEPS_PER_ORBIT].map(|n| thomas_unwrapped(&orbit, n));
        let (t1, t2, t4) = (t1?, t2?, t4?);
        checks.push(Check::below(format!("v={v} relative error"), (t4 - exact).abs() / exact, 1e-6));
        // successive differences shrink by 2⁴ for a fourth-order method
        let order = ((t1 - t2).abs() / (t2 - t4).abs()).log2();
        checks.push(Check::below(format!("v={v} |order - 4|"), (order - 4.0).abs(), 0.5));
        let thomas = thomas_rotation(&orbit, orbit.period(), orbit.period() / STEPS_PER_ORBIT as f64)?;
        checks.push(Check::above(format!("v={v} retrograde"), if thomas.retrograde { 1.0 } else { 0.0 }, 0.5));
    }
    let fast = lab_circular_orbit(1.0, 0.8)?;
    checks.push(Check::below(
        "v=0.8 equals 4π/3",
        (thomas_unwrapped(&fast, STEPS_PER_ORBIT)? - 4.0 * PI / 3.0).abs(),
        1e-6 * 4.0 * PI / 3.0,
    ));
    Ok(checks)
}

fn conventional_setup(a: f64, v: f64) -> Result<(RotatingFrame, CircularOrbit)> {
    let f = rotating(ProfileKind::Conventional, a)?;
    let k = f.profile.k_for_speed(v).expect("speed below 1");
    let orbit = f.space_point(Vec4::new(0.0, k.sqrt(), 0.0, 0.0))?;
    Ok((f, orbit))
}

fn foucault_equivalence() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for a in [1.0, 1.5] {
        let (f, orbit) = conventional_setup(a, 0.5)?;
        let s_t = orbit.period();
        let rep = foucault_precession(&f, &orbit, s_t, s_t / STEPS_PER_ORBIT as f64)?;
        let lt = &rep.transport;
        let mut worst: f64 = 0.0;
        for j in 0..100 {
            let i = j * (lt.len() - 1) / 99;
            let st = &lt.states[i];
            let pdup = st.ps * st.jacobian * st.ps;
            worst = worst.max((lt.omega(i) + pdup).norm());
        }
        checks.push(Check::below(format!("a={a} max ‖Ω + PDUP‖"), worst, 1e-6));
        checks.push(Check::above(format!("a={a} meaningful"), if rep.meaningful { 1.0 } else { 0.0 }, 0.5));
    }
    Ok(checks)
}

fn condition_e() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let (f, orbit) = conventional_setup(1.0, 0.5)?;
    let s_t = orbit.period();
    let step = s_t / STEPS_PER_ORBIT as f64;
    let c = compare_foucault_vs_thomas(&f, &orbit, s_t, step)?;
    checks.push(Check::below("conventional condition_e_residual", c.condition_e_residual, 1e-6));
    checks.push(Check::below("conventional |θ_F − θ_T|", (c.foucault_angle - c.thomas_angle).abs(), 1e-5));

    let line: Arc<dyn WorldLine> = Arc::new(orbit);
    let fw = make_custom_frame(line.clone(), TransportVariant::FermiWalker, LinMap4::zero())?;
    let c = compare_foucault_vs_thomas(&fw, line.as_ref(), s_t, step)?;
    checks.push(Check::below("custom_fw θ_F", c.foucault_angle, 1e-6));
    checks.push(Check::above("custom_fw θ_T", c.thomas_angle, 0.9));

    let u0 = orbit.velocity(0.0);
    let gamma = rotation_generator(u0, Vec4::e_z() * (0.5 / s_t))?;
    let twisted = make_custom_frame(line.clone(), TransportVariant::Boost, gamma)?;
    let c = compare_foucault_vs_thomas(&twisted, line.as_ref(), s_t, step)?;
    checks.push(Check::above("boost+Γ |θ_F − θ_T|", (c.foucault_angle - c.thomas_angle).abs(), 0.1));
    Ok(checks)
}

fn transport_identities() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let (f, orbit) = conventional_setup(1.0, 0.5)?;
    let s_t = orbit.period();
    let step = s_t / STEPS_PER_ORBIT as f64;
    let lt = integrate_lie_transport(&f, &orbit, s_t, step)?;
    let last = lt.final_state();
    checks.push(Check::below(
        "L(s_T)ṙ(0) = ṙ(s_T)",
        (last.l.apply(orbit.velocity(0.0)) - orbit.velocity(s_t)).max_abs(),
        1e-6,
    ));
    checks.push(Check::below("A⁻¹A = P(0)", (last.a_inv * last.a - last.p0).max_abs(), 1e-6));
    checks.push(Check::below("AA⁻¹ = P(s_T)", (last.a * last.a_inv - last.ps).max_abs(), 1e-6));

    let line: Arc<dyn WorldLine> = Arc::new(orbit);
    for variant in [TransportVariant::Boost, TransportVariant::FermiWalker] {
        let custom = make_custom_frame(line.clone(), variant, LinMap4::zero())?;
        let lt = integrate_lie_transport(&custom, line.as_ref(), s_t, step)?;
        let worst = lt
            .states
            .iter()
            .step_by(64)
            .chain(std::iter::once(lt.final_state()))
            .try_fold(0.0f64, |m, st| -> Result<f64> {
                Ok(m.max((st.a - st.ps * custom.base_operator(st.s)?).max_abs()))
            })?;
        checks.push(Check::below(format!("A = P·H ({variant})"), worst, 1e-6));
    }

    // L against central differences of the flow in six directions
    let x0 = orbit.position(0.0);
    let eps = 1e-4;
    let dirs = [
        Vec4::e_t(),
        Vec4::e_x(),
        Vec4::e_y(),
        Vec4::e_z(),
        Vec4::new(0.5, 0.5, -0.5, 0.5),
        Vec4::new(0.0, 0.6, 0.8, 0.0),
    ];
    let worst = dirs
        .par_iter()
        .map(|d| -> Result<f64> {
            let plus = integrate_flow(&f, x0 + *d * eps, s_t, step)?;
            let minus = integrate_flow(&f, x0 - *d * eps, s_t, step)?;
            let fd = (plus - minus) * (0.5 / eps);
            let l = last.l.apply(*d);
            Ok((fd - l).max_abs() / l.max_abs())
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    checks.push(Check::below("L vs flow differences (relative)", worst, 1e-5));
    Ok(checks)
}

fn random_generator(rng: &mut ChaCha8Rng) -> LinMap4 {
    let c = |rng: &mut ChaCha8Rng| rng.random_range(-1.5..1.5);
    wedge(Vec4::e_t(), Vec4::e_x()).scale(c(rng))
        + wedge(Vec4::e_t(), Vec4::e_y()).scale(c(rng))
        + wedge(Vec4::e_t(), Vec4::e_z()).scale(c(rng))
        + wedge(Vec4::e_y(), Vec4::e_x()).scale(c(rng))
        + wedge(Vec4::e_z(), Vec4::e_y()).scale(c(rng))
        + wedge(Vec4::e_x(), Vec4::e_z()).scale(c(rng))
}

fn conservation() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let orbit = lab_circular_orbit(1.0, 0.5)?;
    let s_t = orbit.period();
    let step = s_t / STEPS_PER_ORBIT as f64;
    let h = fermi_walker_operator(&orbit, s_t, step)?;
    let tetrad = [orbit.velocity(0.0), Vec4::e_x(), Vec4::e_y(), Vec4::e_z()];
    let mut gram: f64 = 0.0;
    for a in &tetrad {
        for b in &tetrad {
            gram = gram.max((dot(h.apply(*a), h.apply(*b)) - dot(*a, *b)).abs());
        }
    }
    checks.push(Check::below("Fermi-Walker tetrad Gram matrix", gram, 1e-9));

    let (f, orbit) = conventional_setup(1.0, 0.5)?;
    let rep = foucault_precession(&f, &orbit, s_t, step)?;
    let z0 = Vec4::e_x();
    let track = gyro_from_report(&rep, &orbit, z0)?;
    let drift = track
        .states
        .iter()
        .map(|g| {
            let h0 = g.h0.expect("frame track");
            (dot(h0, h0).sqrt() - 1.0).abs()
        })
        .fold(0.0, f64::max);
    checks.push(Check::below("|h0| drift", drift, 1e-7));
    checks.push(Check::below("h0 two-route agreement", track.two_route_residual, 1e-6));

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut iso: f64 = 0.0;
    for _ in 0..200 {
        let g = random_generator(&mut rng);
        let s = rng.random_range(-2.0..2.0);
        iso = iso.max(exp_generator(&g, s).isometry_residual());
    }
    checks.push(Check::below("exp_generator isometry", iso, 1e-10));
    Ok(checks)
}

fn orthogonal_time_checks() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let orbits = [
        lab_circular_orbit(1.0, 0.5)?,
        conventional_setup(1.5, 0.8)?.1,
        rotating(ProfileKind::TrocherisTakeno, 1.0)?.space_point(Vec4::new(0.0, 0.3, 0.2, 0.0))?,
    ];
    let mut root: f64 = 0.0;
    let mut grad: f64 = 0.0;
    for orbit in &orbits {
        let (lo, hi) = (-orbit.period(), 2.0 * orbit.period());
        for i in 0..=60 {
            let sigma = lo + (hi - lo) * (0.01 + 0.98 * i as f64 / 60.0);
            let x = orbit.position(sigma);
            root = root.max((orthogonal_time(orbit, x)? - sigma).abs());
            let d = finite_difference_jacobian(&|y| orthogonal_time(orbit, y).map(|s| Vec4::new(s, 0.0, 0.0, 0.0)), x)?;
            // raise the index of the covector ∂s/∂x
            let g = Vec4::new(-d.entry(0, 0), d.entry(0, 1), d.entry(0, 2), d.entry(0, 3));
            grad = grad.max((g + orbit.velocity(sigma)).max_abs());
        }
    }
    checks.push(Check::below("|s(r(σ)) − σ|", root, 1e-10));
    checks.push(Check::below("|∇s + ṙ|", grad, 1e-6));
    Ok(checks)
}
