//! Vectors, rotations and boxes shared by every module.

use nalgebra::{Matrix3, Rotation3, Unit};

use crate::error::UsageError;

/// Cartesian 3-vector. Positions are in meters, moments in A·m², fields in tesla.
pub type Vec3 = nalgebra::Vector3<f64>;

/// Tolerance on orthonormality and determinant of a [`Rotation`].
pub const ROTATION_TOL: f64 = 1e-12;

/// Returns true when all three components are finite.
pub fn is_finite(v: &Vec3) -> bool {
    v.iter().all(|c| c.is_finite())
}

/// Proper rotation in 3-D, exposed as an orthonormal matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation(Rotation3<f64>);

impl Default for Rotation {
    fn default() -> Self {
        Self::identity()
    }
}

impl Rotation {
    pub fn identity() -> Self {
        Rotation(Rotation3::identity())
    }

    /// Rotation by `angle` radians about `axis` (right-handed).
    pub fn about_axis(axis: Vec3, angle: f64) -> Result<Self, UsageError> {
        if !is_finite(&axis) || axis.norm() == 0.0 || !angle.is_finite() {
            return Err(UsageError::new("rotation axis must be finite and nonzero"));
        }
        Ok(Rotation(Rotation3::from_axis_angle(&Unit::new_normalize(axis), angle)))
    }

    /// Fixed-axis angles in degrees: rotate about x, then y, then z
    /// (matrix `Rz · Ry · Rx`).
    pub fn from_xyz_deg(deg: [f64; 3]) -> Result<Self, UsageError> {
        if deg.iter().any(|d| !d.is_finite()) {
            return Err(UsageError::new("rotation angles must be finite"));
        }
        Ok(Rotation(Rotation3::from_euler_angles(deg[0].to_radians(), deg[1].to_radians(), deg[2].to_radians())))
    }

    /// Inverse of [`Rotation::from_xyz_deg`].
    pub fn to_xyz_deg(&self) -> [f64; 3] {
        let (r, p, y) = self.0.euler_angles();
        [r.to_degrees(), p.to_degrees(), y.to_degrees()]
    }

    /// Checks orthonormality and unit determinant before accepting `m`.
    pub fn from_matrix(m: Matrix3<f64>) -> Result<Self, UsageError> {
        if m.iter().any(|c| !c.is_finite()) {
            return Err(UsageError::new("rotation matrix has non-finite entries"));
        }
        let defect = (m.transpose() * m - Matrix3::identity()).abs().max();
        if defect > ROTATION_TOL || (m.determinant() - 1.0).abs() > ROTATION_TOL {
            return Err(UsageError::new("matrix is not a proper rotation"));
        }
        Ok(Rotation(Rotation3::from_matrix_unchecked(m)))
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        self.0.matrix()
    }

    pub fn apply(&self, v: &Vec3) -> Vec3 {
        self.0 * v
    }

    /// `self` applied after `inner`.
    pub fn compose(&self, inner: &Rotation) -> Rotation {
        Rotation(self.0 * inner.0)
    }

    pub fn inverse(&self) -> Rotation {
        Rotation(self.0.inverse())
    }
}

/// Axis-aligned box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: Vec3,
    pub max: Vec3,
}

impl Aabb {
    pub fn new(min: Vec3, max: Vec3) -> Result<Self, UsageError> {
        if !is_finite(&min) || !is_finite(&max) || (0..3).any(|i| min[i] >= max[i]) {
            return Err(UsageError::new("box needs finite corners with min < max on every axis"));
        }
        Ok(Aabb { min, max })
    }

    /// Cube of half-width `half` around `center`.
    pub fn cube(center: Vec3, half: f64) -> Result<Self, UsageError> {
        Self::new(center.add_scalar(-half), center.add_scalar(half))
    }

    pub fn contains(&self, p: &Vec3) -> bool {
        (0..3).all(|i| p[i] >= self.min[i] && p[i] <= self.max[i])
    }

    pub fn diagonal(&self) -> f64 {
        (self.max - self.min).norm()
    }

    pub fn center(&self) -> Vec3 {
        (self.min + self.max) * 0.5
    }
}

/// Shortest distance from `p` to the segment `a`–`b`.
pub fn point_segment_distance(p: &Vec3, a: &Vec3, b: &Vec3) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).dot(&ab) / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}
