//! Minkowski vectors and linear maps in one fixed inertial chart.
//!
//! Components are `(t, x, y, z)` with signature `(-,+,+,+)` and `c = 1`. All
//! geometric operations (adjoints, projectors, wedges, boosts) are expressed
//! through the metric so that they do not depend on the chart.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::{Matrix3, Matrix4, Vector4};

use crate::error::{Error, Result};

/// Tolerance used when validating four-velocities.
pub const UNIT_TOL: f64 = 1e-12;
/// Tolerance on the isometry residual accepted by [`rotation_angle`].
pub const ISOMETRY_TOL: f64 = 1e-8;

const METRIC: [f64; 4] = [-1.0, 1.0, 1.0, 1.0];

/// A spacetime vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vec4(pub(crate) Vector4<f64>);

impl Vec4 {
    pub const fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        Vec4(Vector4::new(t, x, y, z))
    }

    pub fn zero() -> Self {
        Vec4(Vector4::zeros())
    }

    /// Standard basis vector `i` of the chart (0 = t, 1 = x, ...).
    pub fn basis(i: usize) -> Self {
        let mut v = Vector4::zeros();
        v[i] = 1.0;
        Vec4(v)
    }

    pub fn e_t() -> Self {
        Self::basis(0)
    }
    pub fn e_x() -> Self {
        Self::basis(1)
    }
    pub fn e_y() -> Self {
        Self::basis(2)
    }
    pub fn e_z() -> Self {
        Self::basis(3)
    }

    /// Four-velocity of an observer moving with 3-velocity `(vx, vy, vz)`.
    pub fn four_velocity(vx: f64, vy: f64, vz: f64) -> Result<Self> {
        let v2 = vx * vx + vy * vy + vz * vz;
        if v2 >= 1.0 {
            return Err(Error::Superluminal { speed: v2.sqrt() });
        }
        let g = 1.0 / (1.0 - v2).sqrt();
        Ok(Vec4::new(g, g * vx, g * vy, g * vz))
    }

    pub fn from_array(c: [f64; 4]) -> Self {
        Vec4(Vector4::from(c))
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.0[0], self.0[1], self.0[2], self.0[3]]
    }

    pub fn t(&self) -> f64 {
        self.0[0]
    }
    pub fn x(&self) -> f64 {
        self.0[1]
    }
    pub fn y(&self) -> f64 {
        self.0[2]
    }
    pub fn z(&self) -> f64 {
        self.0[3]
    }

    pub fn dot(&self, other: &Vec4) -> f64 {
        dot(*self, *other)
    }

    /// Minkowski magnitude `sqrt(|v·v|)`.
    pub fn magnitude(&self) -> f64 {
        self.dot(self).abs().sqrt()
    }

    /// Largest absolute component; a chart norm used for residuals.
    pub fn max_abs(&self) -> f64 {
        self.0.amax()
    }

    /// Euclidean norm of the components, used for tolerances only.
    pub fn chart_norm(&self) -> f64 {
        self.0.norm()
    }

    /// Checks `v·v = -1` and `t > 0` to within `tol`.
    pub fn check_four_velocity(&self, tol: f64) -> Result<()> {
        let n = self.dot(self);
        if (n + 1.0).abs() > tol || self.t() <= 0.0 {
            return Err(Error::NotFourVelocity { norm_sq: n, t: self.t() });
        }
        Ok(())
    }
}

impl Add for Vec4 {
    type Output = Vec4;
    fn add(self, rhs: Vec4) -> Vec4 {
        Vec4(self.0 + rhs.0)
    }
}

impl AddAssign for Vec4 {
    fn add_assign(&mut self, rhs: Vec4) {
        self.0 += rhs.0;
    }
}

impl Sub for Vec4 {
    type Output = Vec4;
    fn sub(self, rhs: Vec4) -> Vec4 {
        Vec4(self.0 - rhs.0)
    }
}

impl Neg for Vec4 {
    type Output = Vec4;
    fn neg(self) -> Vec4 {
        Vec4(-self.0)
    }
}

impl Mul<f64> for Vec4 {
    type Output = Vec4;
    fn mul(self, rhs: f64) -> Vec4 {
        Vec4(self.0 * rhs)
    }
}

impl Mul<Vec4> for f64 {
    type Output = Vec4;
    fn mul(self, rhs: Vec4) -> Vec4 {
        Vec4(rhs.0 * self)
    }
}

impl fmt::Display for Vec4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.9}, {:.9}, {:.9}, {:.9})", self.t(), self.x(), self.y(), self.z())
    }
}

/// Minkowski product with signature `(-,+,+,+)`.
pub fn dot(v: Vec4, w: Vec4) -> f64 {
    -v.0[0] * w.0[0] + v.0[1] * w.0[1] + v.0[2] * w.0[2] + v.0[3] * w.0[3]
}

/// A linear map of spacetime vectors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinMap4(pub(crate) Matrix4<f64>);

impl LinMap4 {
    pub fn identity() -> Self {
        LinMap4(Matrix4::identity())
    }

    pub fn zero() -> Self {
        LinMap4(Matrix4::zeros())
    }

    /// Builds a map from its component rows: `entries[i][j]` is the `i`-th
    /// component of the image of basis vector `j`.
    pub fn from_rows(entries: [[f64; 4]; 4]) -> Self {
        LinMap4(Matrix4::from_fn(|i, j| entries[i][j]))
    }

    /// Map whose columns are the images of the chart basis vectors.
    pub fn from_columns(cols: [Vec4; 4]) -> Self {
        LinMap4(Matrix4::from_columns(&[cols[0].0, cols[1].0, cols[2].0, cols[3].0]))
    }

    pub fn to_rows(&self) -> [[f64; 4]; 4] {
        let mut out = [[0.0; 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = self.0[(i, j)];
            }
        }
        out
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn column(&self, j: usize) -> Vec4 {
        Vec4(self.0.column(j).into_owned())
    }

    /// `(a ⊗ b) w = a · dot(b, w)`.
    pub fn outer(a: Vec4, b: Vec4) -> Self {
        // lowering b with the metric turns the dyad into a matrix
        let mut m = Matrix4::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = a.0[i] * METRIC[j] * b.0[j];
            }
        }
        LinMap4(m)
    }

    pub fn apply(&self, v: Vec4) -> Vec4 {
        Vec4(self.0 * v.0)
    }

    pub fn compose(&self, other: &LinMap4) -> LinMap4 {
        LinMap4(self.0 * other.0)
    }

    pub fn scale(&self, s: f64) -> LinMap4 {
        LinMap4(self.0 * s)
    }

    /// Metric adjoint: `dot(A x, y) = dot(x, A* y)`.
    pub fn adjoint(&self) -> LinMap4 {
        LinMap4(Matrix4::from_fn(|i, j| METRIC[i] * self.0[(j, i)] * METRIC[j]))
    }

    pub fn symmetric_part(&self) -> LinMap4 {
        (*self + self.adjoint()).scale(0.5)
    }

    pub fn antisymmetric_part(&self) -> LinMap4 {
        (*self - self.adjoint()).scale(0.5)
    }

    /// Frobenius norm of the components.
    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> f64 {
        self.0.amax()
    }

    /// `‖A + A*‖`; zero iff the map is metric-antisymmetric.
    pub fn antisymmetry_residual(&self) -> f64 {
        (*self + self.adjoint()).norm()
    }

    pub fn is_antisymmetric(&self, tol: f64) -> bool {
        self.antisymmetry_residual() <= tol * (1.0 + self.norm())
    }

    /// Largest deviation of `dot(A e_i, A e_j)` from `dot(e_i, e_j)` over the chart basis.
    pub fn isometry_residual(&self) -> f64 {
        let g = Matrix4::from_diagonal(&Vector4::from(METRIC));
        (self.0.transpose() * g * self.0 - g).amax()
    }

    pub fn inverse(&self) -> Option<LinMap4> {
        self.0.try_inverse().map(LinMap4)
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }

    /// Rotation rate of a spatial generator: `sqrt(-tr(A²)/2)`.
    pub fn rotation_rate(&self) -> f64 {
        (-0.5 * (self.0 * self.0).trace()).max(0.0).sqrt()
    }

    /// Checks `A* = -A` within `tol` (relative to the map's norm).
    pub fn check_antisymmetric(&self, tol: f64) -> Result<()> {
        let residual = self.antisymmetry_residual();
        if residual > tol * (1.0 + self.norm()) {
            return Err(Error::NotAntisymmetric { residual });
        }
        Ok(())
    }
}

impl Add for LinMap4 {
    type Output = LinMap4;
    fn add(self, rhs: LinMap4) -> LinMap4 {
        LinMap4(self.0 + rhs.0)
    }
}

impl Sub for LinMap4 {
    type Output = LinMap4;
    fn sub(self, rhs: LinMap4) -> LinMap4 {
        LinMap4(self.0 - rhs.0)
    }
}

impl Neg for LinMap4 {
    type Output = LinMap4;
    fn neg(self) -> LinMap4 {
        LinMap4(-self.0)
    }
}

impl Mul for LinMap4 {
    type Output = LinMap4;
    fn mul(self, rhs: LinMap4) -> LinMap4 {
        LinMap4(self.0 * rhs.0)
    }
}

impl Mul<Vec4> for LinMap4 {
    type Output = Vec4;
    fn mul(self, rhs: Vec4) -> Vec4 {
        Vec4(self.0 * rhs.0)
    }
}

impl Mul<f64> for LinMap4 {
    type Output = LinMap4;
    fn mul(self, rhs: f64) -> LinMap4 {
        LinMap4(self.0 * rhs)
    }
}

impl fmt::Display for LinMap4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..4 {
            writeln!(
                f,
                "[{:>14.9} {:>14.9} {:>14.9} {:>14.9}]",
                self.0[(i, 0)],
                self.0[(i, 1)],
                self.0[(i, 2)],
                self.0[(i, 3)]
            )?;
        }
        Ok(())
    }
}

/// Orthogonal projection onto the rest space of `u`: `1 + u ⊗ u`.
pub fn projector(u: Vec4) -> Result<LinMap4> {
    u.check_four_velocity(UNIT_TOL)?;
    Ok(projector_unchecked(u))
}

pub(crate) fn projector_unchecked(u: Vec4) -> LinMap4 {
    LinMap4::identity() + LinMap4::outer(u, u)
}

/// `(x ∧ y) z = x·dot(y, z) - y·dot(x, z)`.
pub fn wedge(x: Vec4, y: Vec4) -> LinMap4 {
    LinMap4::outer(x, y) - LinMap4::outer(y, x)
}

/// The pure boost in the plane of `u` and `u2` that carries `u` to `u2`.
pub fn boost(u: Vec4, u2: Vec4) -> Result<LinMap4> {
    u.check_four_velocity(UNIT_TOL)?;
    u2.check_four_velocity(UNIT_TOL)?;
    Ok(boost_unchecked(u, u2))
}

pub(crate) fn boost_unchecked(u: Vec4, u2: Vec4) -> LinMap4 {
    let sum = u + u2;
    let denom = 1.0 - dot(u, u2);
    LinMap4::identity() + LinMap4::outer(sum, sum).scale(1.0 / denom) - LinMap4::outer(u2, u).scale(2.0)
}

/// Derivative of `s ↦ boost(u, w(s))` given `w` and `ẇ`.
pub(crate) fn boost_derivative(u: Vec4, w: Vec4, w_dot: Vec4) -> LinMap4 {
    let sum = u + w;
    let denom = 1.0 - dot(u, w);
    let denom_dot = -dot(u, w_dot);
    (LinMap4::outer(w_dot, sum) + LinMap4::outer(sum, w_dot)).scale(1.0 / denom)
        - LinMap4::outer(sum, sum).scale(denom_dot / (denom * denom))
        - LinMap4::outer(w_dot, u).scale(2.0)
}

/// `e^{sA}` for a metric-antisymmetric generator `A`.
///
/// Simple generators (a single rotation or boost plane, `A³ = λA`) use the
/// closed form; anything else falls back to scaling and squaring.
pub fn exp_generator(a: &LinMap4, s: f64) -> LinMap4 {
    let sa = a.scale(s);
    let sq = sa * sa;
    let cube = sq * sa;
    let lambda = 0.5 * sq.trace();
    let scale = 1.0 + sa.norm().powi(3);
    if (cube - sa.scale(lambda)).norm() > 1e-12 * scale {
        return LinMap4(sa.0.exp());
    }
    let id = LinMap4::identity();
    if lambda.abs() < 1e-14 {
        return id + sa + sq.scale(0.5);
    }
    if lambda < 0.0 {
        let th = (-lambda).sqrt();
        id + sa.scale(th.sin() / th) + sq.scale((1.0 - th.cos()) / (th * th))
    } else {
        let eta = lambda.sqrt();
        id + sa.scale(eta.sinh() / eta) + sq.scale((eta.cosh() - 1.0) / (eta * eta))
    }
}

/// Right-handed orthonormal basis of the rest space of `u`: the boost of the
/// chart's spatial axes from `e_t` to `u`.
pub fn rest_space_basis(u: Vec4) -> Result<[Vec4; 3]> {
    let b = boost(Vec4::e_t(), u)?;
    Ok([b.apply(Vec4::e_x()), b.apply(Vec4::e_y()), b.apply(Vec4::e_z())])
}

/// Spatial rotation generator about `axis` (a spacelike vector orthogonal to
/// `u`) at rate `|axis|`, oriented by the right-hand rule in the rest space of `u`.
pub fn rotation_generator(u: Vec4, axis: Vec4) -> Result<LinMap4> {
    u.check_four_velocity(UNIT_TOL)?;
    let b = boost_unchecked(Vec4::e_t(), u);
    let binv = boost_unchecked(u, Vec4::e_t());
    let n = binv.apply(axis);
    if n.t().abs() > 1e-9 * (1.0 + axis.chart_norm()) {
        return Err(Error::InvalidArgument("rotation axis is not orthogonal to the four-velocity".into()));
    }
    let (nx, ny, nz) = (n.x(), n.y(), n.z());
    // rest-frame generator: w ↦ n × w
    let g = wedge(Vec4::e_y(), Vec4::e_x()).scale(nz)
        + wedge(Vec4::e_z(), Vec4::e_y()).scale(nx)
        + wedge(Vec4::e_x(), Vec4::e_z()).scale(ny);
    Ok(b * g * binv)
}

/// Angle and axis of a spatial rotation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotationAngle {
    /// Principal angle in `[0, π]`.
    pub angle: f64,
    /// Unit rotation axis in the rest space; `None` when the angle is 0 or π.
    pub axis: Option<Vec4>,
}

/// Extracts the rotation angle of `r` restricted to the rest space of `u`.
pub fn rotation_angle(r: &LinMap4, u: Vec4) -> Result<RotationAngle> {
    u.check_four_velocity(UNIT_TOL)?;
    let basis = rest_space_basis(u)?;
    let fixes = (r.apply(u) - u).max_abs();
    let full = [u, basis[0], basis[1], basis[2]];
    let mut iso = fixes;
    for a in &full {
        for b in &full {
            iso = iso.max((dot(r.apply(*a), r.apply(*b)) - dot(*a, *b)).abs());
        }
    }
    if iso > ISOMETRY_TOL {
        return Err(Error::NotIsometric { residual: iso });
    }
    let m = Matrix3::from_fn(|i, j| dot(basis[i], r.apply(basis[j])));
    if m.determinant() < 0.0 {
        return Err(Error::ImproperRotation);
    }
    let cos = 0.5 * (m.trace() - 1.0);
    let w = [
        0.5 * (m[(2, 1)] - m[(1, 2)]),
        0.5 * (m[(0, 2)] - m[(2, 0)]),
        0.5 * (m[(1, 0)] - m[(0, 1)]),
    ];
    let sin = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
    let angle = sin.atan2(cos.clamp(-1.0, 1.0));
    let axis = if sin > 1e-9 {
        Some(basis[0] * (w[0] / sin) + basis[1] * (w[1] / sin) + basis[2] * (w[2] / sin))
    } else {
        None
    };
    Ok(RotationAngle { angle, axis })
}

/// Signed angle from `a` to `b` about `axis`, all in the rest space of `u`.
///
/// Uses the volume form `det[u, axis, a, b]` for the sine.
pub fn signed_angle(u: Vec4, axis: Vec4, a: Vec4, b: Vec4) -> f64 {
    let n = axis * (1.0 / axis.magnitude());
    let pa = a - n * dot(n, a);
    let pb = b - n * dot(n, b);
    let cos = dot(pa, pb);
    let vol = Matrix4::from_columns(&[u.0, n.0, pa.0, pb.0]).determinant();
    vol.atan2(cos)
}
