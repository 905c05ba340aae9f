//! Radial profiles `α(k)`, `β(k)` of the uniformly rotating frames, with
//! `k = |Ω(x − o)|²` and the normalization `α² − β²k = 1`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProfileKind {
    /// `α = 1/√(1 − a²k)`, `β = a/√(1 − a²k)`; `a = 1` is the conventional frame.
    Conventional,
    /// `α = cosh √k`, `β = sinh √k / √k`.
    TrocherisTakeno,
    /// `α = √(1 + k)`, `β = 1`.
    Modified,
    /// `α = a`, `β = √(a² − 1)/√k`.
    ConstantA,
}

impl ProfileKind {
    pub fn name(self) -> &'static str {
        match self {
            ProfileKind::Conventional => "conventional",
            ProfileKind::TrocherisTakeno => "trocheris_takeno",
            ProfileKind::Modified => "modified",
            ProfileKind::ConstantA => "constant_a",
        }
    }
}

impl fmt::Display for ProfileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProfileKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "conventional" => Ok(ProfileKind::Conventional),
            "trocheris_takeno" => Ok(ProfileKind::TrocherisTakeno),
            "modified" => Ok(ProfileKind::Modified),
            "constant_a" => Ok(ProfileKind::ConstantA),
            other => Err(Error::InvalidArgument(format!("unknown profile '{other}'"))),
        }
    }
}

/// Profile values and their `k`-derivatives at one radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfileValues {
    pub alpha: f64,
    pub beta: f64,
    pub alpha_prime: f64,
    pub beta_prime: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotatingProfile {
    pub kind: ProfileKind,
    /// Shape parameter of the conventional and constant-`a` profiles (1 otherwise).
    pub a: f64,
}

/// Validates the parameter and builds one of the four named profiles.
pub fn make_rotating_profile(kind: ProfileKind, a: f64) -> Result<RotatingProfile> {
    match kind {
        ProfileKind::Conventional if !(a >= 1.0 && a.is_finite()) => {
            Err(Error::InvalidArgument(format!("conventional profile needs a >= 1, got {a}")))
        }
        ProfileKind::ConstantA if !(a > 1.0 && a.is_finite()) => {
            Err(Error::InvalidArgument(format!("constant_a profile needs a > 1, got {a}")))
        }
        ProfileKind::TrocherisTakeno | ProfileKind::Modified => Ok(RotatingProfile { kind, a: 1.0 }),
        _ => Ok(RotatingProfile { kind, a }),
    }
}

impl RotatingProfile {
    pub fn conventional() -> Self {
        RotatingProfile { kind: ProfileKind::Conventional, a: 1.0 }
    }

    /// Upper end of the open domain in `k` (infinite when unbounded).
    pub fn k_limit(&self) -> f64 {
        match self.kind {
            ProfileKind::Conventional => 1.0 / (self.a * self.a),
            _ => f64::INFINITY,
        }
    }

    pub fn eval(&self, k: f64) -> Result<ProfileValues> {
        if k.is_nan() || k < 0.0 {
            return Err(Error::ProfileDomain { k, reason: "k must be non-negative" });
        }
        match self.kind {
            ProfileKind::Conventional => {
                let a2 = self.a * self.a;
                let q = 1.0 - a2 * k;
                if q <= 0.0 {
                    return Err(Error::ProfileDomain { k, reason: "a²k must be below 1" });
                }
                let alpha = 1.0 / q.sqrt();
                let cube = alpha * alpha * alpha;
                Ok(ProfileValues {
                    alpha,
                    beta: self.a * alpha,
                    alpha_prime: 0.5 * a2 * cube,
                    beta_prime: 0.5 * a2 * self.a * cube,
                })
            }
            ProfileKind::TrocherisTakeno => {
                let r = k.sqrt();
                if r < 1e-3 {
                    // power series of cosh √k and sinh √k / √k
                    let k2 = k * k;
                    return Ok(ProfileValues {
                        alpha: 1.0 + k / 2.0 + k2 / 24.0 + k2 * k / 720.0,
                        beta: 1.0 + k / 6.0 + k2 / 120.0 + k2 * k / 5040.0,
                        alpha_prime: 0.5 + k / 12.0 + k2 / 240.0,
                        beta_prime: 1.0 / 6.0 + k / 60.0 + k2 / 1680.0,
                    });
                }
                let (sh, ch) = (r.sinh(), r.cosh());
                Ok(ProfileValues {
                    alpha: ch,
                    beta: sh / r,
                    alpha_prime: sh / (2.0 * r),
                    beta_prime: ch / (2.0 * k) - sh / (2.0 * k * r),
                })
            }
            ProfileKind::Modified => {
                let alpha = (1.0 + k).sqrt();
                Ok(ProfileValues { alpha, beta: 1.0, alpha_prime: 0.5 / alpha, beta_prime: 0.0 })
            }
            ProfileKind::ConstantA => {
                if k == 0.0 {
                    return Err(Error::ProfileDomain { k, reason: "constant_a profile is singular on the axis" });
                }
                let c = (self.a * self.a - 1.0).sqrt();
                let r = k.sqrt();
                Ok(ProfileValues {
                    alpha: self.a,
                    beta: c / r,
                    alpha_prime: 0.0,
                    beta_prime: -0.5 * c / (k * r),
                })
            }
        }
    }

    /// Residuals `(2α′ − αβ², 2β′ − β³)`; both vanish exactly for the rigid family.
    pub fn ode_residual(&self, k: f64) -> Result<(f64, f64)> {
        let p = self.eval(k)?;
        Ok((
            2.0 * p.alpha_prime - p.alpha * p.beta * p.beta,
            2.0 * p.beta_prime - p.beta * p.beta * p.beta,
        ))
    }

    /// `k` at which a space point moves at lab speed `v`, i.e. `β√k/α = v`.
    ///
    /// Returns `None` for the constant-`a` profile, whose speed `√(a²−1)/a`
    /// does not depend on the radius.
    pub fn k_for_speed(&self, v: f64) -> Option<f64> {
        if !(0.0..1.0).contains(&v) {
            return None;
        }
        match self.kind {
            ProfileKind::Conventional => Some(v * v / (self.a * self.a)),
            ProfileKind::TrocherisTakeno => {
                let r = v.atanh();
                Some(r * r)
            }
            ProfileKind::Modified => Some(v * v / (1.0 - v * v)),
            ProfileKind::ConstantA => None,
        }
    }
}

/// `(2α′ − αβ², 2β′ − β³)` at `k`.
pub fn profile_ode_residual(p: &RotatingProfile, k: f64) -> Result<(f64, f64)> {
    p.ode_residual(k)
}
