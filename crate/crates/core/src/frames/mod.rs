//! Reference frames as four-velocity fields.

mod custom;
mod profile;
mod rotating;

pub use custom::{custom_frame_angular_velocity_analytic, make_custom_frame, CustomFrame, TransportVariant};
pub use profile::{make_rotating_profile, profile_ode_residual, ProfileKind, ProfileValues, RotatingProfile};
pub use rotating::RotatingFrame;

use crate::error::Result;
use crate::minkowski::{projector_unchecked, LinMap4, Vec4};

/// A four-velocity field `U(x)` together with its derivative `DU(x)`.
pub trait FrameField: Send + Sync {
    fn velocity(&self, x: Vec4) -> Result<Vec4>;

    /// `DU(x)`, mapping a displacement `w` to the directional derivative of `U`.
    fn jacobian(&self, x: Vec4) -> Result<LinMap4> {
        finite_difference_jacobian(&|y| self.velocity(y), x)
    }
}

impl<F: FrameField + ?Sized> FrameField for &F {
    fn velocity(&self, x: Vec4) -> Result<Vec4> {
        (**self).velocity(x)
    }
    fn jacobian(&self, x: Vec4) -> Result<LinMap4> {
        (**self).jacobian(x)
    }
}

/// The constant field `U ≡ u`.
#[derive(Clone, Copy, Debug)]
pub struct InertialFrame {
    pub u: Vec4,
}

impl InertialFrame {
    pub fn new(u: Vec4) -> Result<Self> {
        u.check_four_velocity(crate::minkowski::UNIT_TOL)?;
        Ok(InertialFrame { u })
    }
}

impl FrameField for InertialFrame {
    fn velocity(&self, _x: Vec4) -> Result<Vec4> {
        Ok(self.u)
    }
    fn jacobian(&self, _x: Vec4) -> Result<LinMap4> {
        Ok(LinMap4::zero())
    }
}

/// Central differences with step `1e-5·(1 + |x|)` and one Richardson level.
pub fn finite_difference_jacobian(f: &dyn Fn(Vec4) -> Result<Vec4>, x: Vec4) -> Result<LinMap4> {
    let h = 1e-5 * (1.0 + x.chart_norm());
    let central = |h: f64| -> Result<[Vec4; 4]> {
        let mut cols = [Vec4::zero(); 4];
        for (j, col) in cols.iter_mut().enumerate() {
            let e = Vec4::basis(j) * h;
            *col = (f(x + e)? - f(x - e)?) * (0.5 / h);
        }
        Ok(cols)
    };
    let coarse = central(h)?;
    let fine = central(0.5 * h)?;
    let mut cols = [Vec4::zero(); 4];
    for j in 0..4 {
        cols[j] = (fine[j] * 4.0 - coarse[j]) * (1.0 / 3.0);
    }
    Ok(LinMap4::from_columns(cols))
}

/// Angular velocity (vorticity) `½·P(DU − DU*)P` given `U` and `DU` at a point.
///
/// Oriented so that it equals `P·DU·P` whenever that map is antisymmetric.
pub fn angular_velocity_from(u: Vec4, du: &LinMap4) -> LinMap4 {
    let p = projector_unchecked(u);
    p * du.antisymmetric_part() * p
}

/// Angular velocity of the frame at `x`.
pub fn angular_velocity(f: &dyn FrameField, x: Vec4) -> Result<LinMap4> {
    let u = f.velocity(x)?;
    let du = f.jacobian(x)?;
    Ok(angular_velocity_from(u, &du))
}

/// Relative size of the metric-symmetric part of a map, `‖(M + M*)/2‖ / ‖M‖`
/// (zero for a vanishing map).
pub fn relative_symmetric_part(m: &LinMap4) -> f64 {
    let n = m.norm();
    if n < 1e-12 {
        return 0.0;
    }
    m.symmetric_part().norm() / n
}

/// Rigidity residual from `U` and `DU` at a point.
pub fn rigidity_residual_from(u: Vec4, du: &LinMap4) -> f64 {
    let p = projector_unchecked(u);
    relative_symmetric_part(&(p * *du * p))
}

/// Relative symmetric part of `P·DU·P` at `x`; zero iff the frame is rigid there.
pub fn rigidity_residual(f: &dyn FrameField, x: Vec4) -> Result<f64> {
    let u = f.velocity(x)?;
    let du = f.jacobian(x)?;
    Ok(rigidity_residual_from(u, &du))
}

/// Verdict of a rigidity test against a guard band.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rigidity {
    Rigid,
    NonRigid,
    Inconclusive,
}

impl Rigidity {
    /// `rigid_tol < nonrigid_tol`; residuals in between are inconclusive.
    pub fn classify(residual: f64, rigid_tol: f64, nonrigid_tol: f64) -> Self {
        if residual < rigid_tol {
            Rigidity::Rigid
        } else if residual > nonrigid_tol {
            Rigidity::NonRigid
        } else {
            Rigidity::Inconclusive
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Rigidity::Rigid => "rigid",
            Rigidity::NonRigid => "non-rigid",
            Rigidity::Inconclusive => "inconclusive",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inertial_frame_has_no_rotation() {
        let f = InertialFrame::new(Vec4::four_velocity(0.2, -0.3, 0.1).unwrap()).unwrap();
        let x = Vec4::new(1.0, 2.0, 3.0, 4.0);
        assert_eq!(angular_velocity(&f, x).unwrap().max_abs(), 0.0);
        assert_eq!(rigidity_residual(&f, x).unwrap(), 0.0);
        let fd = finite_difference_jacobian(&|y| f.velocity(y), x).unwrap();
        assert!(fd.max_abs() < 1e-12);
    }

    #[test]
    fn classify_guard_band() {
        assert_eq!(Rigidity::classify(1e-10, 1e-8, 1e-3), Rigidity::Rigid);
        assert_eq!(Rigidity::classify(1e-2, 1e-8, 1e-3), Rigidity::NonRigid);
        assert_eq!(Rigidity::classify(1e-5, 1e-8, 1e-3), Rigidity::Inconclusive);
    }

    #[test]
    fn fd_jacobian_of_linear_field() {
        let m = LinMap4::from_rows([
            [0.1, 0.2, 0.0, 0.0],
            [0.0, -0.4, 0.3, 0.0],
            [0.5, 0.0, 0.0, 0.7],
            [0.0, 0.0, 0.2, 0.1],
        ]);
        let f = |y: Vec4| Ok(m.apply(y));
        let j = finite_difference_jacobian(&f, Vec4::new(1.0, -1.0, 2.0, 0.5)).unwrap();
        assert!((j - m).max_abs() < 1e-10);
    }
}
