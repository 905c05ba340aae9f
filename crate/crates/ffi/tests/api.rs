use std::ffi::{CStr, CString};
use std::ptr;

use relkin_ffi::*;

fn last_error() -> String {
    let p = relkin_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn orbit_and_thomas() {
    unsafe {
        let mut orbit = ptr::null_mut();
        assert_eq!(relkin_orbit_new(1.0, 0.5, &mut orbit), RelkinStatus::Ok);
        let (mut v, mut g, mut p) = (0.0, 0.0, 0.0);
        assert_eq!(relkin_orbit_info(orbit, &mut v, &mut g, &mut p), RelkinStatus::Ok);
        assert!((v - 0.5).abs() < 1e-14);
        assert!((g - 1.0 / 0.75f64.sqrt()).abs() < 1e-14);
        let mut t = RelkinThomas::default();
        assert_eq!(relkin_thomas(orbit, 4096, &mut t), RelkinStatus::Ok);
        assert!((t.unwrapped_angle - 0.972_012_149_757_284_9).abs() < 1e-6);
        assert_eq!(t.retrograde, 1);
        let (mut x, mut u) = ([0.0; 4], [0.0; 4]);
        assert_eq!(relkin_orbit_state(orbit, 0.0, x.as_mut_ptr(), u.as_mut_ptr()), RelkinStatus::Ok);
        assert_eq!(x, [0.0, 0.5, 0.0, 0.0]);
        assert!((u[0] - g).abs() < 1e-14);
        relkin_orbit_free(orbit);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut orbit = ptr::null_mut();
        assert_eq!(relkin_orbit_new(1.0, 1.5, &mut orbit), RelkinStatus::Superluminal);
        assert!(orbit.is_null());
        assert!(last_error().contains("superluminal"));
        assert_eq!(relkin_orbit_new(1.0, 0.5, ptr::null_mut()), RelkinStatus::NullPointer);
        let mut frame = ptr::null_mut();
        assert_eq!(relkin_frame_rotating(17, 1.0, 1.0, &mut frame), RelkinStatus::InvalidArgument);
        assert_eq!(relkin_frame_rotating(RelkinProfile::Conventional as u32, 1.0, 1.0, &mut frame), RelkinStatus::Ok);
        assert!(relkin_last_error().is_null());
        let far = [0.0, 2.0, 0.0, 0.0];
        let mut u = [0.0; 4];
        assert_eq!(relkin_frame_velocity(frame, far.as_ptr(), u.as_mut_ptr()), RelkinStatus::Domain);
        relkin_frame_free(frame);
        relkin_frame_free(ptr::null_mut());
        let mut t = RelkinThomas::default();
        assert_eq!(relkin_thomas(ptr::null(), 16, &mut t), RelkinStatus::NullPointer);
    }
}

#[test]
fn frames_and_rigidity() {
    unsafe {
        let x = [0.3, 0.2, -0.1, 0.4];
        let mut r = 0.0;
        let mut frame = ptr::null_mut();
        relkin_frame_rotating(RelkinProfile::Conventional as u32, 1.0, 1.0, &mut frame);
        assert_eq!(relkin_frame_rigidity(frame, x.as_ptr(), &mut r), RelkinStatus::Ok);
        assert!(r < 1e-8);
        relkin_frame_free(frame);
        relkin_frame_rotating(RelkinProfile::TrocherisTakeno as u32, 1.0, 1.0, &mut frame);
        relkin_frame_rigidity(frame, x.as_ptr(), &mut r);
        assert!(r > 1e-3);
        relkin_frame_free(frame);

        let mut orbit = ptr::null_mut();
        relkin_orbit_new(1.0, 0.5, &mut orbit);
        let spin = [0.0, 0.0, 0.05];
        for rotation in [ptr::null(), spin.as_ptr()] {
            assert_eq!(relkin_frame_custom(orbit, RelkinTransport::Boost as u32, rotation, &mut frame), RelkinStatus::Ok);
            let mut p = [0.0; 4];
            relkin_orbit_state(orbit, 1.0, p.as_mut_ptr(), ptr::null_mut());
            let mut u = [0.0; 4];
            assert_eq!(relkin_frame_velocity(frame, p.as_ptr(), u.as_mut_ptr()), RelkinStatus::Ok);
            assert!((u[0] * u[0] - u[1] * u[1] - u[2] * u[2] - u[3] * u[3] - 1.0).abs() < 1e-12);
            relkin_frame_free(frame);
        }
        relkin_orbit_free(orbit);
    }
}

#[test]
fn scenario_comparison() {
    let toml = CString::new("frame.kind = \"conventional\"\norbit.omega = 1.0\norbit.radius = 0.5\nintegrator.step_count = 1024\n").unwrap();
    unsafe {
        let mut sc = ptr::null_mut();
        assert_eq!(relkin_scenario_from_toml(toml.as_ptr(), &mut sc), RelkinStatus::Ok);
        let mut c = RelkinComparison::default();
        assert_eq!(relkin_scenario_compare(sc, &mut c), RelkinStatus::Ok);
        assert_eq!(c.matched, 1);
        assert!((c.thomas_angle - c.foucault_angle).abs() < 1e-6);
        relkin_scenario_free(sc);

        let tt = CString::new(toml.to_str().unwrap().replace("conventional", "trocheris_takeno")).unwrap();
        assert_eq!(relkin_scenario_from_toml(tt.as_ptr(), &mut sc), RelkinStatus::Ok);
        assert_eq!(relkin_scenario_compare(sc, &mut c), RelkinStatus::NotMeaningful);
        relkin_scenario_free(sc);

        let bad = CString::new("frame.kind = \"nope\"").unwrap();
        assert_eq!(relkin_scenario_from_toml(bad.as_ptr(), &mut sc), RelkinStatus::InvalidArgument);
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(relkin_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
