//! Scenario files: a frame, an orbit and integrator settings in TOML.
//!
//! ```toml
//! frame.kind = "conventional"
//! frame.a = 1.0
//! orbit.omega = 1.0
//! orbit.radius = 0.5
//! integrator.step_count = 4096
//! tolerances.rigid = 1e-8
//! tolerances.nonrigid = 1e-3
//! ```

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::frames::{make_custom_frame, make_rotating_profile, FrameField, ProfileKind, RotatingFrame, TransportVariant};
use crate::minkowski::{rest_space_basis, rotation_generator, LinMap4, Vec4};
use crate::worldline::{lab_circular_orbit, CircularOrbit, WorldLine};

pub const MIN_STEP_COUNT: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrameKind {
    Rotating(ProfileKind),
    Custom(TransportVariant),
}

impl FrameKind {
    pub fn name(self) -> &'static str {
        match self {
            FrameKind::Rotating(p) => p.name(),
            FrameKind::Custom(TransportVariant::Boost) => "custom_boost",
            FrameKind::Custom(TransportVariant::FermiWalker) => "custom_fw",
        }
    }
}

impl fmt::Display for FrameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FrameKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "custom_boost" => Ok(FrameKind::Custom(TransportVariant::Boost)),
            "custom_fw" => Ok(FrameKind::Custom(TransportVariant::FermiWalker)),
            other => other.parse().map(FrameKind::Rotating),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    frame: RawFrame,
    orbit: RawOrbit,
    gamma_generator: Option<[f64; 3]>,
    #[serde(default)]
    integrator: RawIntegrator,
    #[serde(default)]
    tolerances: RawTolerances,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFrame {
    kind: String,
    a: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOrbit {
    omega: f64,
    radius: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIntegrator {
    step_count: usize,
}

impl Default for RawIntegrator {
    fn default() -> Self {
        RawIntegrator { step_count: 4096 }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTolerances {
    rigid: f64,
    nonrigid: f64,
}

impl Default for RawTolerances {
    fn default() -> Self {
        RawTolerances { rigid: 1e-8, nonrigid: 1e-3 }
    }
}

/// A validated scenario.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub kind: FrameKind,
    pub a: f64,
    pub omega: f64,
    pub radius: f64,
    /// Rotation vector of `Γ` in the rest space of the orbit's initial velocity.
    pub gamma_generator: Option<[f64; 3]>,
    pub step_count: usize,
    pub rigid_tol: f64,
    pub nonrigid_tol: f64,
}

/// The frame and orbit a scenario describes.
pub struct Setup {
    pub frame: Box<dyn FrameField>,
    pub orbit: Arc<CircularOrbit>,
    pub s_t: f64,
    pub step: f64,
}

impl Scenario {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawScenario =
            toml::from_str(text).map_err(|e| Error::InvalidArgument(format!("scenario: {}", e.message())))?;
        let kind: FrameKind = raw.frame.kind.parse()?;
        let scenario = Scenario {
            kind,
            a: raw.frame.a.unwrap_or(1.0),
            omega: raw.orbit.omega,
            radius: raw.orbit.radius,
            gamma_generator: raw.gamma_generator,
            step_count: raw.integrator.step_count,
            rigid_tol: raw.tolerances.rigid,
            nonrigid_tol: raw.tolerances.nonrigid,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return bad(format!("orbit.omega must be positive, got {}", self.omega));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return bad(format!("orbit.radius must be positive, got {}", self.radius));
        }
        if self.omega * self.radius >= 1.0 {
            return bad(format!("omega·radius = {} must be below 1", self.omega * self.radius));
        }
        if self.step_count < MIN_STEP_COUNT {
            return bad(format!("integrator.step_count must be at least {MIN_STEP_COUNT}"));
        }
        if !(self.rigid_tol > 0.0 && self.rigid_tol < self.nonrigid_tol) {
            return bad("tolerances must satisfy 0 < rigid < nonrigid".into());
        }
        if self.gamma_generator.is_some() && !matches!(self.kind, FrameKind::Custom(_)) {
            return bad("gamma_generator only applies to custom frames".into());
        }
        if let FrameKind::Rotating(p) = self.kind {
            let profile = make_rotating_profile(p, self.a)?;
            let k = (self.omega * self.radius).powi(2);
            profile.eval(k)?;
        }
        Ok(())
    }

    /// Same scenario with the orbit radius chosen so the space point moves at lab speed `v`.
    pub fn with_speed(&self, v: f64) -> Result<Scenario> {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::InvalidArgument(format!("speed must lie in (0, 1), got {v}")));
        }
        let k = match self.kind {
            FrameKind::Custom(_) => v * v,
            FrameKind::Rotating(p) => make_rotating_profile(p, self.a)?.k_for_speed(v).ok_or_else(|| {
                Error::InvalidArgument(format!("{} frames have a fixed rim speed", p.name()))
            })?,
        };
        let mut out = self.clone();
        out.radius = k.sqrt() / self.omega;
        out.validate()?;
        Ok(out)
    }

    /// Builds the frame and the orbit through `(0, radius, 0, 0)`.
    pub fn build(&self) -> Result<Setup> {
        let (frame, orbit): (Box<dyn FrameField>, Arc<CircularOrbit>) = match self.kind {
            FrameKind::Rotating(p) => {
                let frame = RotatingFrame::in_lab(make_rotating_profile(p, self.a)?, self.omega)?;
                let orbit = Arc::new(frame.space_point(Vec4::new(0.0, self.radius, 0.0, 0.0))?);
                (Box::new(frame), orbit)
            }
            FrameKind::Custom(variant) => {
                let orbit = Arc::new(lab_circular_orbit(self.omega, self.radius)?);
                let gamma = self.gamma(orbit.as_ref())?;
                let line: Arc<dyn WorldLine> = orbit.clone();
                (Box::new(make_custom_frame(line, variant, gamma)?), orbit)
            }
        };
        let s_t = orbit.period();
        let step = s_t / self.step_count as f64;
        Ok(Setup { frame, orbit, s_t, step })
    }

    fn gamma(&self, orbit: &CircularOrbit) -> Result<LinMap4> {
        let Some(g) = self.gamma_generator else {
            return Ok(LinMap4::zero());
        };
        let u0 = orbit.velocity(0.0);
        let e = rest_space_basis(u0)?;
        rotation_generator(u0, e[0] * g[0] + e[1] * g[1] + e[2] * g[2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
frame.kind = "conventional"
frame.a = 1.0
orbit.omega = 1.0
orbit.radius = 0.5
integrator.step_count = 1024
tolerances.rigid = 1e-8
tolerances.nonrigid = 1e-3
"#;

    #[test]
    fn parses_dotted_keys() {
        let s = Scenario::from_toml_str(BASE).unwrap();
        assert_eq!(s.kind, FrameKind::Rotating(ProfileKind::Conventional));
        assert_eq!(s.step_count, 1024);
        let setup = s.build().unwrap();
        assert!((setup.s_t - 5.441398092702653).abs() < 1e-12);
    }

    #[test]
    fn parses_tables_and_gamma() {
        let text = "gamma_generator = [0.0, 0.0, 0.1]\n[frame]\nkind = \"custom_boost\"\n[orbit]\nomega = 2.0\nradius = 0.2\n";
        let s = Scenario::from_toml_str(text).unwrap();
        assert_eq!(s.kind, FrameKind::Custom(TransportVariant::Boost));
        assert_eq!(s.step_count, 4096);
        s.build().unwrap();
    }

    #[test]
    fn rejects_bad_scenarios() {
        for (from, to) in [
            ("orbit.radius = 0.5", "orbit.radius = 1.2"),
            ("integrator.step_count = 1024", "integrator.step_count = 100"),
            ("tolerances.rigid = 1e-8", "tolerances.rigid = 1e-2"),
            ("frame.kind = \"conventional\"", "frame.kind = \"spinning\""),
            ("frame.a = 1.0", "frame.a = 1.0\nframe.b = 2.0"),
        ] {
            assert!(Scenario::from_toml_str(&BASE.replace(from, to)).is_err(), "{to}");
        }
    }

    #[test]
    fn speed_sets_radius() {
        let s = Scenario::from_toml_str(&BASE.replace("\"conventional\"", "\"trocheris_takeno\"")).unwrap();
        let fast = s.with_speed(0.5).unwrap();
        let setup = fast.build().unwrap();
        assert!((setup.orbit.speed() - 0.5).abs() < 1e-12);
    }
}
