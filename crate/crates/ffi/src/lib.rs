//! C interface to `relkin`.
//!
//! Objects are opaque handles created by `relkin_*_new` functions and released
//! with the matching `relkin_*_free`. Every fallible call returns a
//! [`RelkinStatus`]; on failure a description is available from
//! [`relkin_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use relkin::frames::{make_custom_frame, make_rotating_profile, rigidity_residual, FrameField, ProfileKind, RotatingFrame, TransportVariant};
use relkin::minkowski::{rest_space_basis, rotation_generator};
use relkin::precession::{compare_foucault_vs_thomas, thomas_rotation, Verdict};
use relkin::scenario::{Scenario, Setup};
use relkin::worldline::{lab_circular_orbit, CircularOrbit, WorldLine};
use relkin::{Error, LinMap4, Vec4};

/// Result of a call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelkinStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// A requested speed is not below 1.
    Superluminal = 3,
    /// The point is outside the region where the frame is defined.
    Domain = 4,
    /// An iteration or integration did not meet its accuracy check.
    Numerical = 5,
    /// The frame is not rigid along the orbit.
    NotMeaningful = 6,
    /// The orbit's velocity does not return to its initial value.
    NoReturn = 7,
    /// The orbit is not an integral curve of the frame.
    NotIntegralCurve = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelkinProfile {
    Conventional = 0,
    TrocherisTakeno = 1,
    Modified = 2,
    ConstantA = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelkinTransport {
    Boost = 0,
    FermiWalker = 1,
}

/// Circular orbit in the lab frame.
pub struct RelkinOrbit(Arc<CircularOrbit>);

/// Frame field on Minkowski space.
pub struct RelkinFrame(Box<dyn FrameField>);

/// A scenario with its frame and orbit already built.
pub struct RelkinScenario(Setup);

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct RelkinThomas {
    pub s_t: f64,
    pub angle: f64,
    pub unwrapped_angle: f64,
    /// 1 when the rotation is opposite to the orbital motion.
    pub retrograde: i32,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct RelkinComparison {
    pub speed: f64,
    pub gamma: f64,
    pub s_t: f64,
    pub thomas_angle: f64,
    pub foucault_angle: f64,
    pub thomas_angle_unwrapped: f64,
    pub foucault_angle_unwrapped: f64,
    pub condition_e_residual: f64,
    pub rigidity_residual: f64,
    /// 1 when the angles agree.
    pub matched: i32,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> RelkinStatus {
    match e {
        Error::InvalidArgument(_)
        | Error::NotFourVelocity { .. }
        | Error::NotAntisymmetric { .. }
        | Error::NotIsometric { .. }
        | Error::ImproperRotation
        | Error::NotOrthogonal { .. } => RelkinStatus::InvalidArgument,
        Error::Superluminal { .. } => RelkinStatus::Superluminal,
        Error::ProfileDomain { .. } | Error::FrameDomain(_) | Error::Singularity { .. } => RelkinStatus::Domain,
        Error::NoConvergence { .. } | Error::NonUniqueRoot { .. } | Error::NoRoot | Error::StepRejected { .. } => {
            RelkinStatus::Numerical
        }
        Error::NotMeaningful { .. } => RelkinStatus::NotMeaningful,
        Error::ReturnConditionViolated { .. } => RelkinStatus::NoReturn,
        Error::NotIntegralCurve { .. } => RelkinStatus::NotIntegralCurve,
    }
}

enum Fail {
    Null,
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

fn guard(body: impl FnOnce() -> Result<(), Fail>) -> RelkinStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            RelkinStatus::Ok
        }
        Ok(Err(Fail::Null)) => {
            set_error("null pointer argument".into());
            RelkinStatus::NullPointer
        }
        Ok(Err(Fail::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            RelkinStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null)
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null);
    }
    out.write(value);
    Ok(())
}

unsafe fn read4(p: *const f64) -> Result<Vec4, Fail> {
    if p.is_null() {
        return Err(Fail::Null);
    }
    Ok(Vec4::from_array(*p.cast::<[f64; 4]>()))
}

/// Message for the last failed call on this thread, or null after a success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn relkin_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn relkin_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Orbit of radius `radius` about the lab z axis at angular velocity `omega`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn relkin_orbit_new(omega: f64, radius: f64, out: *mut *mut RelkinOrbit) -> RelkinStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail::Null);
        }
        let orbit = lab_circular_orbit(omega, radius)?;
        put(out, Box::into_raw(Box::new(RelkinOrbit(Arc::new(orbit)))))
    })
}

/// # Safety
/// `orbit` must come from [`relkin_orbit_new`] and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn relkin_orbit_free(orbit: *mut RelkinOrbit) {
    if !orbit.is_null() {
        drop(Box::from_raw(orbit));
    }
}

/// Lab speed, Lorentz factor and proper period of the orbit.
///
/// # Safety
/// `orbit` must be a live handle; each output must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn relkin_orbit_info(
    orbit: *const RelkinOrbit,
    speed: *mut f64,
    gamma: *mut f64,
    period: *mut f64,
) -> RelkinStatus {
    guard(|| {
        let o = &get(orbit)?.0;
        put(speed, o.speed())?;
        put(gamma, o.gamma())?;
        put(period, o.period())
    })
}

/// Position and four-velocity at proper time `s`, as `(t, x, y, z)`.
///
/// # Safety
/// `orbit` must be a live handle; `position` and `velocity` must each hold 4 doubles.
#[no_mangle]
pub unsafe extern "C" fn relkin_orbit_state(
    orbit: *const RelkinOrbit,
    s: f64,
    position: *mut f64,
    velocity: *mut f64,
) -> RelkinStatus {
    guard(|| {
        let o = &get(orbit)?.0;
        put(position.cast::<[f64; 4]>(), o.position(s).to_array())?;
        put(velocity.cast::<[f64; 4]>(), o.velocity(s).to_array())
    })
}

/// Thomas rotation over one period, integrated with `steps` steps.
///
/// # Safety
/// `orbit` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn relkin_thomas(orbit: *const RelkinOrbit, steps: u32, out: *mut RelkinThomas) -> RelkinStatus {
    guard(|| {
        let o = &get(orbit)?.0;
        if steps == 0 {
            return Err(Error::InvalidArgument("steps must be positive".into()).into());
        }
        let s_t = o.period();
        let t = thomas_rotation(o.as_ref(), s_t, s_t / steps as f64)?;
        put(
            out,
            RelkinThomas {
                s_t,
                angle: t.angle,
                unwrapped_angle: t.unwrapped_angle.abs(),
                retrograde: t.retrograde as i32,
            },
        )
    })
}

/// Rotating frame about the lab z axis; `profile` is a [`RelkinProfile`] value.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn relkin_frame_rotating(
    profile: u32,
    a: f64,
    omega: f64,
    out: *mut *mut RelkinFrame,
) -> RelkinStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail::Null);
        }
        let kind = match profile {
            x if x == RelkinProfile::Conventional as u32 => ProfileKind::Conventional,
            x if x == RelkinProfile::TrocherisTakeno as u32 => ProfileKind::TrocherisTakeno,
            x if x == RelkinProfile::Modified as u32 => ProfileKind::Modified,
            x if x == RelkinProfile::ConstantA as u32 => ProfileKind::ConstantA,
            other => return Err(Error::InvalidArgument(format!("unknown profile {other}")).into()),
        };
        let frame = RotatingFrame::in_lab(make_rotating_profile(kind, a)?, omega)?;
        put(out, Box::into_raw(Box::new(RelkinFrame(Box::new(frame)))))
    })
}

/// Frame built around `orbit` by transporting its initial rest space with the
/// [`RelkinTransport`] rule `transport`.
/// `rotation` gives the extra spin as a rotation vector in the initial rest
/// space and may be null for none.
///
/// # Safety
/// `orbit` must be a live handle; `rotation` is null or holds 3 doubles; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn relkin_frame_custom(
    orbit: *const RelkinOrbit,
    transport: u32,
    rotation: *const f64,
    out: *mut *mut RelkinFrame,
) -> RelkinStatus {
    guard(|| {
        let o = get(orbit)?.0.clone();
        if out.is_null() {
            return Err(Fail::Null);
        }
        let gamma = if rotation.is_null() {
            LinMap4::zero()
        } else {
            let g = *rotation.cast::<[f64; 3]>();
            let u0 = o.velocity(0.0);
            let e = rest_space_basis(u0)?;
            rotation_generator(u0, e[0] * g[0] + e[1] * g[1] + e[2] * g[2])?
        };
        let variant = match transport {
            x if x == RelkinTransport::Boost as u32 => TransportVariant::Boost,
            x if x == RelkinTransport::FermiWalker as u32 => TransportVariant::FermiWalker,
            other => return Err(Error::InvalidArgument(format!("unknown transport {other}")).into()),
        };
        let line: Arc<dyn WorldLine> = o;
        let frame = make_custom_frame(line, variant, gamma)?;
        put(out, Box::into_raw(Box::new(RelkinFrame(Box::new(frame)))))
    })
}

/// # Safety
/// `frame` must come from a `relkin_frame_*` constructor and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn relkin_frame_free(frame: *mut RelkinFrame) {
    if !frame.is_null() {
        drop(Box::from_raw(frame));
    }
}

/// Four-velocity of the frame at event `x`.
///
/// # Safety
/// `frame` must be a live handle; `x` and `out` must each hold 4 doubles.
#[no_mangle]
pub unsafe extern "C" fn relkin_frame_velocity(frame: *const RelkinFrame, x: *const f64, out: *mut f64) -> RelkinStatus {
    guard(|| {
        let f = &get(frame)?.0;
        let u = f.velocity(read4(x)?)?;
        put(out.cast::<[f64; 4]>(), u.to_array())
    })
}

/// Relative size of the symmetric part of the projected velocity gradient at `x`;
/// zero for a rigid frame.
///
/// # Safety
/// `frame` must be a live handle; `x` must hold 4 doubles; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn relkin_frame_rigidity(frame: *const RelkinFrame, x: *const f64, out: *mut f64) -> RelkinStatus {
    guard(|| {
        let f = &get(frame)?.0;
        let r = rigidity_residual(f.as_ref(), read4(x)?)?;
        put(out, r)
    })
}

/// Parses and builds a scenario from TOML text.
///
/// # Safety
/// `toml` must be a nul-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn relkin_scenario_from_toml(toml: *const c_char, out: *mut *mut RelkinScenario) -> RelkinStatus {
    guard(|| {
        if toml.is_null() || out.is_null() {
            return Err(Fail::Null);
        }
        let text = CStr::from_ptr(toml)
            .to_str()
            .map_err(|_| Error::InvalidArgument("scenario text is not UTF-8".into()))?;
        let setup = Scenario::from_toml_str(text)?.build()?;
        put(out, Box::into_raw(Box::new(RelkinScenario(setup))))
    })
}

/// # Safety
/// `scenario` must come from [`relkin_scenario_from_toml`] and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn relkin_scenario_free(scenario: *mut RelkinScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Foucault angle against Thomas angle over one period of the scenario's orbit.
///
/// # Safety
/// `scenario` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn relkin_scenario_compare(
    scenario: *const RelkinScenario,
    out: *mut RelkinComparison,
) -> RelkinStatus {
    guard(|| {
        let s = &get(scenario)?.0;
        let c = compare_foucault_vs_thomas(s.frame.as_ref(), s.orbit.as_ref(), s.s_t, s.step)?;
        put(
            out,
            RelkinComparison {
                speed: s.orbit.speed(),
                gamma: s.orbit.gamma(),
                s_t: c.s_t,
                thomas_angle: c.thomas_angle,
                foucault_angle: c.foucault_angle,
                thomas_angle_unwrapped: c.thomas_angle_unwrapped.abs(),
                foucault_angle_unwrapped: c.foucault_angle_unwrapped.abs(),
                condition_e_residual: c.condition_e_residual,
                rigidity_residual: c.rigidity_residual,
                matched: (c.verdict == Verdict::Match) as i32,
            },
        )
    })
}
