//! Scenario-level computations behind the command-line tool and their text/CSV forms.

use std::f64::consts::PI;

use crate::acceptance::ring_points;
use crate::error::Result;
use crate::frames::{make_rotating_profile, rigidity_residual, Rigidity};
use crate::precession::{compare_foucault_vs_thomas, thomas_rotation, RotationComparison, ThomasRotation, Verdict};
use crate::scenario::{FrameKind, Scenario, Setup};
use crate::worldline::WorldLine;

pub const COMPARE_HEADER: &str =
    "v,gamma,s_T,thomas_angle_unwrapped,foucault_angle_unwrapped,rigidity_residual,condition_e_residual,verdict";
pub const THOMAS_HEADER: &str = "v,gamma,s_T,thomas_angle,thomas_angle_unwrapped,retrograde";

/// Number of sample points in a rigidity survey.
pub const RIGIDITY_SAMPLES: usize = 50;

/// Formats `x` with `digits` significant digits, switching to exponent form
/// for very small or very large magnitudes.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        return format!("{}e{exp}", trim_fraction(mantissa));
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_fraction(&format!("{x:.decimals$}")).to_string()
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Angles and residuals are written with this many significant digits.
pub const DIGITS: usize = 12;

fn g(x: f64) -> String {
    format_sig(x, DIGITS)
}

/// Rigidity residuals of a scenario's frame at sample points.
#[derive(Clone, Debug)]
pub struct RigiditySurvey {
    pub k: f64,
    pub profile_residuals: Option<(f64, f64)>,
    pub max_residual: f64,
    pub min_residual: f64,
    pub samples: usize,
    pub verdict: Rigidity,
}

/// Rotating frames are sampled on the cylinder through the orbit; custom
/// frames along the orbit itself, where they are defined.
pub fn rigidity_survey(scenario: &Scenario, setup: &Setup) -> Result<RigiditySurvey> {
    let k = (scenario.omega * scenario.radius).powi(2);
    let (points, profile_residuals) = match scenario.kind {
        FrameKind::Rotating(p) => {
            let profile = make_rotating_profile(p, scenario.a)?;
            (ring_points(k, RIGIDITY_SAMPLES, 11), Some(profile.ode_residual(k)?))
        }
        FrameKind::Custom(_) => {
            let pts = (0..RIGIDITY_SAMPLES)
                .map(|i| setup.orbit.position(setup.s_t * i as f64 / RIGIDITY_SAMPLES as f64))
                .collect();
            (pts, None)
        }
    };
    let mut max_residual: f64 = 0.0;
    let mut min_residual = f64::INFINITY;
    for x in &points {
        let r = rigidity_residual(setup.frame.as_ref(), *x)?;
        max_residual = max_residual.max(r);
        min_residual = min_residual.min(r);
    }
    let verdict = if max_residual < scenario.rigid_tol {
        Rigidity::Rigid
    } else if min_residual > scenario.nonrigid_tol {
        Rigidity::NonRigid
    } else {
        Rigidity::Inconclusive
    };
    Ok(RigiditySurvey { k, profile_residuals, max_residual, min_residual, samples: points.len(), verdict })
}

impl RigiditySurvey {
    pub fn to_text(&self, scenario: &Scenario) -> String {
        let mut out = format!("frame: {} (a = {})\n", scenario.kind, g(scenario.a));
        out += &format!("k = |Ω(x - o)|^2: {}\n", g(self.k));
        if let Some((ra, rb)) = self.profile_residuals {
            out += &format!("profile residual 2α' - αβ²: {}\n", g(ra));
            out += &format!("profile residual 2β' - β³: {}\n", g(rb));
        }
        out += &format!(
            "rigidity residual over {} points: max {}, min {}\n",
            self.samples,
            g(self.max_residual),
            g(self.min_residual)
        );
        out += &format!(
            "guard band: rigid < {}, non-rigid > {}\n",
            g(scenario.rigid_tol),
            g(scenario.nonrigid_tol)
        );
        out += &format!("verdict: {}\n", self.verdict.as_str());
        out
    }
}

/// Thomas rotation over one period of the scenario's orbit.
pub fn scenario_thomas(setup: &Setup) -> Result<ThomasRotation> {
    thomas_rotation(setup.orbit.as_ref(), setup.s_t, setup.step)
}

pub fn thomas_text(setup: &Setup, t: &ThomasRotation) -> String {
    let gamma = setup.orbit.gamma();
    let mut out = format!("speed: {}\ngamma: {}\n", g(setup.orbit.speed()), g(gamma));
    out += &format!("s_T: {}\n", g(t.s_t));
    out += &format!("thomas angle (principal): {}\n", g(t.angle));
    out += &format!("thomas angle (unwrapped): {}\n", g(t.unwrapped_angle.abs()));
    out += &format!("closed form 2π(γ - 1): {}\n", g(2.0 * PI * setup.orbit.gamma_minus_one()));
    match t.axis {
        Some(a) => out += &format!("axis: ({}, {}, {}, {})\n", g(a.t()), g(a.x()), g(a.y()), g(a.z())),
        None => out += "axis: undefined\n",
    }
    out += &format!("retrograde: {}\n", t.retrograde);
    out
}

pub fn thomas_csv_row(setup: &Setup, t: &ThomasRotation) -> String {
    format!(
        "{},{},{},{},{},{}",
        g(setup.orbit.speed()),
        g(setup.orbit.gamma()),
        g(t.s_t),
        g(t.angle),
        g(t.unwrapped_angle.abs()),
        t.retrograde
    )
}

/// One row of a comparison table.
#[derive(Clone, Copy, Debug)]
pub struct CompareRow {
    pub v: f64,
    pub gamma: f64,
    pub comparison: RotationComparison,
}

impl CompareRow {
    pub fn verdict(&self) -> Verdict {
        self.comparison.verdict
    }

    pub fn to_csv(&self) -> String {
        let c = &self.comparison;
        format!(
            "{},{},{},{},{},{},{},{}",
            g(self.v),
            g(self.gamma),
            g(c.s_t),
            g(c.thomas_angle_unwrapped.abs()),
            g(c.foucault_angle_unwrapped.abs()),
            g(c.rigidity_residual),
            g(c.condition_e_residual),
            c.verdict.as_str()
        )
    }

    pub fn to_text(&self) -> String {
        let c = &self.comparison;
        let mut out = format!("speed: {}\ngamma: {}\ns_T: {}\n", g(self.v), g(self.gamma), g(c.s_t));
        out += &format!("thomas angle: {} (unwrapped {})\n", g(c.thomas_angle), g(c.thomas_angle_unwrapped.abs()));
        out += &format!(
            "foucault angle: {} (unwrapped {})\n",
            g(c.foucault_angle),
            g(c.foucault_angle_unwrapped.abs())
        );
        out += &format!("condition e residual ‖A(s_T) - N·P(0)‖: {}\n", g(c.condition_e_residual));
        out += &format!("rigidity residual along orbit: {}\n", g(c.rigidity_residual));
        out += &format!("gyroscope two-route residual: {}\n", g(c.two_route_residual));
        out += &format!("verdict: {}\n", c.verdict.as_str());
        out
    }
}

pub fn scenario_compare(setup: &Setup) -> Result<CompareRow> {
    let comparison = compare_foucault_vs_thomas(setup.frame.as_ref(), setup.orbit.as_ref(), setup.s_t, setup.step)?;
    Ok(CompareRow { v: setup.orbit.speed(), gamma: setup.orbit.gamma(), comparison })
}

/// Evenly spaced speeds from `from` to `to`; a single speed when `count` is 1.
pub fn sweep_speeds(from: f64, to: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![from];
    }
    (0..count)
        .map(|i| from + (to - from) * i as f64 / (count - 1) as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(0.972_012_149_757_284_9, 12), "0.972012149757");
        assert_eq!(format_sig(4.18879020478639, 12), "4.18879020479");
        assert_eq!(format_sig(5.0, 12), "5");
        assert_eq!(format_sig(2.5e-13, 12), "2.5e-13");
        assert_eq!(format_sig(-1234.5, 3), "-1.23e3");
        assert_eq!(format_sig(9.9999999999999, 12), "10");
        assert_eq!(format_sig(0.0, 12), "0");
    }

    #[test]
    fn sweep_grid() {
        assert_eq!(sweep_speeds(0.2, 0.4, 1), vec![0.2]);
        let v = sweep_speeds(0.1, 0.9, 9);
        assert_eq!(v.len(), 9);
        assert!((v[4] - 0.5).abs() < 1e-15);
    }
}
