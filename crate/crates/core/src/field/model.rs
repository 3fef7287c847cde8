//! Analytic model fields.

use super::{b_dipole, FieldError, VectorField};
use crate::error::UsageError;
use crate::geometry::{is_finite, Vec3};

/// Planar double-vortex field lying in the z = 0 plane.
///
/// Each pole produces a field along `b·r̂ + θ̂` (normalized) with magnitude
/// `strength · core_radius / max(r, core_radius)`, so its integral curves are
/// logarithmic spirals `r = a·e^{bθ}`. Poles sit at `(±pole_separation/2, 0, 0)`;
/// the second pole's pattern is the first one turned by 180° about the midpoint,
/// which makes the in-plane field vanish there. Seen along each pole's own
/// outward axis the two patterns turn in opposite senses. A zero separation
/// merges both into a single pole at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpiralVortexParams {
    /// Radial-to-azimuthal ratio `b` (dimensionless).
    pub pitch: f64,
    /// Radius inside which the magnitude is capped, m.
    pub core_radius: f64,
    /// Field magnitude at the core radius, T.
    pub strength: f64,
    pub pole_separation: f64,
}

impl SpiralVortexParams {
    pub fn validated(self) -> Result<Self, UsageError> {
        if !(self.core_radius.is_finite() && self.core_radius > 0.0) {
            return Err(UsageError::new("spiral core radius must be positive"));
        }
        if !(self.pole_separation.is_finite() && self.pole_separation >= 0.0) {
            return Err(UsageError::new("pole separation must be finite and >= 0"));
        }
        if !self.pitch.is_finite() || !self.strength.is_finite() {
            return Err(UsageError::new("spiral pitch and strength must be finite"));
        }
        Ok(self)
    }

    /// Pole centers; one entry when the separation is zero.
    pub fn poles(&self) -> Vec<Vec3> {
        if self.pole_separation == 0.0 {
            vec![Vec3::zeros()]
        } else {
            let h = self.pole_separation / 2.0;
            vec![Vec3::new(-h, 0.0, 0.0), Vec3::new(h, 0.0, 0.0)]
        }
    }

    fn single_pole(&self, q: &Vec3) -> Vec3 {
        let r = q.x.hypot(q.y);
        if r == 0.0 {
            return Vec3::zeros();
        }
        let radial = Vec3::new(q.x / r, q.y / r, 0.0);
        let azimuthal = Vec3::new(-radial.y, radial.x, 0.0);
        let mag = self.strength * self.core_radius / r.max(self.core_radius);
        (radial * self.pitch + azimuthal) * (mag / (1.0 + self.pitch * self.pitch).sqrt())
    }
}

/// Evaluates the double-vortex model at `p`.
pub fn spiral_vortex_field(params: &SpiralVortexParams, p: &Vec3) -> Vec3 {
    params.poles().iter().map(|c| params.single_pole(&(p - c))).sum()
}

/// Closed-form source fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelField {
    Uniform { b: Vec3 },
    PointDipole { moment: Vec3, position: Vec3 },
    SpiralVortex(SpiralVortexParams),
}

impl ModelField {
    pub fn validated(self) -> Result<Self, UsageError> {
        match self {
            ModelField::Uniform { b } if !is_finite(&b) => Err(UsageError::new("uniform field must be finite")),
            ModelField::PointDipole { moment, position } if !is_finite(&moment) || !is_finite(&position) => {
                Err(UsageError::new("dipole moment and position must be finite"))
            }
            ModelField::SpiralVortex(s) => Ok(ModelField::SpiralVortex(s.validated()?)),
            ok => Ok(ok),
        }
    }

    /// The field that is zero everywhere.
    pub fn zero() -> Self {
        ModelField::Uniform { b: Vec3::zeros() }
    }
}

impl VectorField for ModelField {
    fn field(&self, p: &Vec3) -> Result<Vec3, FieldError> {
        match self {
            ModelField::Uniform { b } => Ok(*b),
            ModelField::PointDipole { moment, position } => {
                b_dipole(moment, position, p).map_err(|_| FieldError::ModelSingularity { point: (*p).into() })
            }
            ModelField::SpiralVortex(s) => Ok(spiral_vortex_field(s, p)),
        }
    }

    fn clearance(&self, p: &Vec3) -> Option<f64> {
        match self {
            ModelField::PointDipole { position, .. } => Some((p - position).norm()),
            _ => None,
        }
    }

    fn check_segment(&self, a: &Vec3, b: &Vec3) -> Result<(), FieldError> {
        match self {
            ModelField::PointDipole { position, .. }
                if crate::geometry::point_segment_distance(position, a, b) == 0.0 =>
            {
                Err(FieldError::Path { index: 0 })
            }
            _ => Ok(()),
        }
    }
}
