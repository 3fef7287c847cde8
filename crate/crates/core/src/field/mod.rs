//! Field evaluation: point-dipole superposition, analytic model fields,
//! finite-difference operators and sampled grids.

mod grid;
mod model;
mod ops;

pub use grid::{surface_map, FieldGrid, GridSpec, Quantity};
pub use model::{spiral_vortex_field, ModelField, SpiralVortexParams};
pub use ops::{
    curl, default_fd_step, directional_derivative, divergence, jacobian, scalar_potential, scalar_potential_polyline,
};

use thiserror::Error;

use crate::constants::{MU0, MU0_OVER_4PI};
use crate::error::UsageError;
use crate::geometry::{point_segment_distance, Vec3};
use crate::sources::Assembly;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FieldError {
    #[error("point ({:.6e}, {:.6e}, {:.6e}) lies within the exclusion zone of dipole {index}", point[0], point[1], point[2])]
    Singularity { index: usize, point: [f64; 3] },
    #[error("point ({:.6e}, {:.6e}, {:.6e}) is a singular point of the model field", point[0], point[1], point[2])]
    ModelSingularity { point: [f64; 3] },
    #[error("integration path crosses the exclusion zone of dipole {index}")]
    Path { index: usize },
    #[error("{} grid node(s) fall inside exclusion zones, first {:?}", nodes.len(), nodes.first())]
    NodesInExclusion { nodes: Vec<Vec<usize>> },
    #[error("non-finite field value at ({:.6e}, {:.6e}, {:.6e})", point[0], point[1], point[2])]
    NonFinite { point: [f64; 3] },
    #[error("usage error: {0}")]
    Usage(#[from] UsageError),
}

impl FieldError {
    /// True for errors caused by evaluating too close to a source.
    pub fn is_singular(&self) -> bool {
        matches!(self, FieldError::Singularity { .. } | FieldError::ModelSingularity { .. })
    }
}

/// A static vector field that can refuse evaluation near its singularities.
pub trait VectorField: Sync {
    fn field(&self, p: &Vec3) -> Result<Vec3, FieldError>;

    /// Signed distance from `p` to the nearest excluded region, when the field
    /// has singular points. Negative inside an exclusion zone.
    fn clearance(&self, _p: &Vec3) -> Option<f64> {
        None
    }

    /// Fails when the straight segment `a`–`b` enters an exclusion zone.
    fn check_segment(&self, _a: &Vec3, _b: &Vec3) -> Result<(), FieldError> {
        Ok(())
    }
}

impl<T: VectorField + ?Sized> VectorField for &T {
    fn field(&self, p: &Vec3) -> Result<Vec3, FieldError> {
        (**self).field(p)
    }
    fn clearance(&self, p: &Vec3) -> Option<f64> {
        (**self).clearance(p)
    }
    fn check_segment(&self, a: &Vec3, b: &Vec3) -> Result<(), FieldError> {
        (**self).check_segment(a, b)
    }
}

/// Adapter turning a closure into a singularity-free [`VectorField`].
pub struct FnField<F>(pub F);

impl<F> VectorField for FnField<F>
where
    F: Fn(&Vec3) -> Vec3 + Sync,
{
    fn field(&self, p: &Vec3) -> Result<Vec3, FieldError> {
        Ok((self.0)(p))
    }
}

/// H = B / μ0 of a free-space B field.
pub struct HField<F>(pub F);

impl<F: VectorField> VectorField for HField<F> {
    fn field(&self, p: &Vec3) -> Result<Vec3, FieldError> {
        Ok(self.0.field(p)? / MU0)
    }
    fn clearance(&self, p: &Vec3) -> Option<f64> {
        self.0.clearance(p)
    }
    fn check_segment(&self, a: &Vec3, b: &Vec3) -> Result<(), FieldError> {
        self.0.check_segment(a, b)
    }
}

/// Closed-form field of a point dipole `m` at `source`, tesla:
/// `B = (μ0/4π) [3 (m·r̂) r̂ − m] / |r|³`.
pub fn b_dipole(m: &Vec3, source: &Vec3, p: &Vec3) -> Result<Vec3, FieldError> {
    let r = p - source;
    let d2 = r.norm_squared();
    if d2 == 0.0 {
        return Err(FieldError::Singularity { index: 0, point: (*p).into() });
    }
    Ok(dipole_kernel(m, &r, d2))
}

#[inline]
fn dipole_kernel(m: &Vec3, r: &Vec3, d2: f64) -> Vec3 {
    let d = d2.sqrt();
    let inv3 = 1.0 / (d2 * d);
    (r * (3.0 * m.dot(r) / d2) - m) * (MU0_OVER_4PI * inv3)
}

/// B of any source at `p`.
pub fn b_total<F: VectorField + ?Sized>(source: &F, p: &Vec3) -> Result<Vec3, FieldError> {
    source.field(p)
}

impl VectorField for Assembly {
    /// Sum of the dipole fields in stored order.
    fn field(&self, p: &Vec3) -> Result<Vec3, FieldError> {
        let mut b = Vec3::zeros();
        for (i, (d, excl)) in self.dipoles().iter().zip(self.exclusion_radii()).enumerate() {
            let r = p - d.position;
            let d2 = r.norm_squared();
            if d2 == 0.0 || d2 < excl * excl {
                return Err(FieldError::Singularity { index: i, point: (*p).into() });
            }
            b += dipole_kernel(&d.moment, &r, d2);
        }
        Ok(b)
    }

    fn clearance(&self, p: &Vec3) -> Option<f64> {
        self.dipoles().iter().zip(self.exclusion_radii()).map(|(d, r)| (p - d.position).norm() - r).reduce(f64::min)
    }

    fn check_segment(&self, a: &Vec3, b: &Vec3) -> Result<(), FieldError> {
        for (i, (d, r)) in self.dipoles().iter().zip(self.exclusion_radii()).enumerate() {
            let dist = point_segment_distance(&d.position, a, b);
            if dist == 0.0 || dist < *r {
                return Err(FieldError::Path { index: i });
            }
        }
        Ok(())
    }
}
