//! Magnet primitives and their point-dipole discretization.
//!
//! A uniformly magnetized body is replaced by a grid of point dipoles: the
//! shape's bounding box is split into `resolution` cells per axis, cells whose
//! center lies inside the shape are kept, and the total moment `M·V` is shared
//! equally among them. The total moment is therefore exact at every
//! resolution; refinement only improves the higher multipoles.

mod assembly;
pub mod presets;

pub use assembly::Assembly;
pub use presets::{
    build_grid_array, build_halbach_linear, build_ring_twister, build_single_cube, build_triangular_lattice,
    GridParams, GridPattern, HalbachParams, LatticeParams, MomentPattern, RingParams,
};

use std::f64::consts::PI;

use crate::constants::MU0;
use crate::error::UsageError;
use crate::geometry::{is_finite, Rotation, Vec3};

/// Exclusion radius of a dipole, in units of its cell size.
pub const EXCLUSION_CELLS: f64 = 1.5;

/// Point magnetic dipole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleSource {
    /// Position, m.
    pub position: Vec3,
    /// Moment, A·m².
    pub moment: Vec3,
}

impl DipoleSource {
    pub fn new(position: Vec3, moment: Vec3) -> Result<Self, UsageError> {
        if !is_finite(&position) || !is_finite(&moment) {
            return Err(UsageError::new("dipole position and moment must be finite"));
        }
        Ok(DipoleSource { position, moment })
    }
}

/// Magnet body in its local frame. Dimensions are full lengths in meters,
/// centered on the local origin. Cylinder and plate thickness run along local z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MagnetShape {
    Sphere { radius: f64 },
    Cylinder { radius: f64, height: f64 },
    Cuboid { lx: f64, ly: f64, lz: f64 },
    Plate { lx: f64, ly: f64, thickness: f64 },
}

impl MagnetShape {
    pub fn sphere(radius: f64) -> Result<Self, UsageError> {
        MagnetShape::Sphere { radius }.validated()
    }

    pub fn cylinder(radius: f64, height: f64) -> Result<Self, UsageError> {
        MagnetShape::Cylinder { radius, height }.validated()
    }

    pub fn cuboid(lx: f64, ly: f64, lz: f64) -> Result<Self, UsageError> {
        MagnetShape::Cuboid { lx, ly, lz }.validated()
    }

    pub fn cube(edge: f64) -> Result<Self, UsageError> {
        Self::cuboid(edge, edge, edge)
    }

    pub fn plate(lx: f64, ly: f64, thickness: f64) -> Result<Self, UsageError> {
        MagnetShape::Plate { lx, ly, thickness }.validated()
    }

    pub fn validated(self) -> Result<Self, UsageError> {
        if self.dims().iter().all(|d| d.is_finite() && *d > 0.0) {
            Ok(self)
        } else {
            Err(UsageError::new(format!("every dimension of {} must be positive", self.kind())))
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            MagnetShape::Sphere { .. } => "sphere",
            MagnetShape::Cylinder { .. } => "cylinder",
            MagnetShape::Cuboid { .. } => "cuboid",
            MagnetShape::Plate { .. } => "plate",
        }
    }

    /// Raw dimension list in declaration order.
    pub fn dims(&self) -> Vec<f64> {
        match *self {
            MagnetShape::Sphere { radius } => vec![radius],
            MagnetShape::Cylinder { radius, height } => vec![radius, height],
            MagnetShape::Cuboid { lx, ly, lz } => vec![lx, ly, lz],
            MagnetShape::Plate { lx, ly, thickness } => vec![lx, ly, thickness],
        }
    }

    pub fn volume(&self) -> f64 {
        match *self {
            MagnetShape::Sphere { radius } => 4.0 / 3.0 * PI * radius.powi(3),
            MagnetShape::Cylinder { radius, height } => PI * radius * radius * height,
            MagnetShape::Cuboid { lx, ly, lz } => lx * ly * lz,
            MagnetShape::Plate { lx, ly, thickness } => lx * ly * thickness,
        }
    }

    /// Half-widths of the local bounding box.
    pub fn half_extents(&self) -> Vec3 {
        match *self {
            MagnetShape::Sphere { radius } => Vec3::repeat(radius),
            MagnetShape::Cylinder { radius, height } => Vec3::new(radius, radius, height / 2.0),
            MagnetShape::Cuboid { lx, ly, lz } => Vec3::new(lx, ly, lz) / 2.0,
            MagnetShape::Plate { lx, ly, thickness } => Vec3::new(lx, ly, thickness) / 2.0,
        }
    }

    /// Radius of the smallest origin-centered ball holding the shape.
    pub fn bounding_radius(&self) -> f64 {
        match *self {
            MagnetShape::Sphere { radius } => radius,
            _ => self.half_extents().norm(),
        }
    }

    /// Membership test for a point in the local frame (boundary included).
    pub fn contains_local(&self, p: &Vec3) -> bool {
        match *self {
            MagnetShape::Sphere { radius } => p.norm_squared() <= radius * radius,
            MagnetShape::Cylinder { radius, height } => {
                p.x * p.x + p.y * p.y <= radius * radius && p.z.abs() <= height / 2.0
            }
            MagnetShape::Cuboid { .. } | MagnetShape::Plate { .. } => {
                let h = self.half_extents();
                (0..3).all(|i| p[i].abs() <= h[i])
            }
        }
    }

    /// Edge of the cube with the same volume as one discretization cell.
    pub fn cell_size(&self, resolution: usize) -> f64 {
        let h = self.half_extents() * 2.0 / resolution as f64;
        (h.x * h.y * h.z).cbrt()
    }
}

/// Uniform magnetization `M` (A/m) along a unit direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformMagnetization {
    direction: Vec3,
    magnitude: f64,
}

impl UniformMagnetization {
    pub fn new(direction: Vec3, magnitude: f64) -> Result<Self, UsageError> {
        if !is_finite(&direction) || direction.norm() == 0.0 {
            return Err(UsageError::new("magnetization direction must be finite and nonzero"));
        }
        if !magnitude.is_finite() || magnitude < 0.0 {
            return Err(UsageError::new("magnetization magnitude must be finite and >= 0"));
        }
        Ok(UniformMagnetization { direction: direction.normalize(), magnitude })
    }

    /// `M = B_r / μ0`.
    pub fn from_remanence(direction: Vec3, remanence: f64) -> Result<Self, UsageError> {
        Self::new(direction, remanence / MU0)
    }

    pub fn direction(&self) -> Vec3 {
        self.direction
    }

    pub fn magnitude(&self) -> f64 {
        self.magnitude
    }

    pub fn remanence(&self) -> f64 {
        self.magnitude * MU0
    }

    pub fn vector(&self) -> Vec3 {
        self.direction * self.magnitude
    }

    /// Same magnetization with its direction rotated.
    pub fn rotated(&self, r: &Rotation) -> Self {
        UniformMagnetization { direction: r.apply(&self.direction).normalize(), magnitude: self.magnitude }
    }
}

/// Shape, pose and magnetization of one magnet. The magnetization direction
/// is expressed in the world frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlacedMagnet {
    pub shape: MagnetShape,
    pub position: Vec3,
    pub rotation: Rotation,
    pub magnetization: UniformMagnetization,
}

impl PlacedMagnet {
    pub fn new(
        shape: MagnetShape,
        position: Vec3,
        rotation: Rotation,
        magnetization: UniformMagnetization,
    ) -> Result<Self, UsageError> {
        let shape = shape.validated()?;
        if !is_finite(&position) {
            return Err(UsageError::new("magnet position must be finite"));
        }
        Ok(PlacedMagnet { shape, position, rotation, magnetization })
    }

    /// Total moment `M·V`, A·m².
    pub fn moment(&self) -> Vec3 {
        self.magnetization.vector() * self.shape.volume()
    }

    /// The magnet moved rigidly by `r` about the world origin.
    pub fn rotated(&self, r: &Rotation) -> Self {
        PlacedMagnet {
            shape: self.shape,
            position: r.apply(&self.position),
            rotation: r.compose(&self.rotation),
            magnetization: self.magnetization.rotated(r),
        }
    }
}

/// Splits a uniformly magnetized body into point dipoles.
///
/// Cells are visited in lexicographic `(i, j, k)` order with `k` fastest, and
/// a cell is kept when its center lies inside the shape.
pub fn discretize_magnet(
    shape: &MagnetShape,
    magnetization: &UniformMagnetization,
    position: &Vec3,
    rotation: &Rotation,
    resolution: usize,
) -> Result<Vec<DipoleSource>, UsageError> {
    if resolution == 0 {
        return Err(UsageError::new("resolution must be a positive integer"));
    }
    let shape = shape.validated()?;
    let half = shape.half_extents();
    let cell = half * 2.0 / resolution as f64;
    let center = |i: usize, axis: usize| -half[axis] + (i as f64 + 0.5) * cell[axis];

    let mut local = Vec::new();
    for i in 0..resolution {
        for j in 0..resolution {
            for k in 0..resolution {
                let c = Vec3::new(center(i, 0), center(j, 1), center(k, 2));
                if shape.contains_local(&c) {
                    local.push(c);
                }
            }
        }
    }
    // Every supported shape contains its own center, and for odd resolutions the
    // central cell sits exactly there; even resolutions keep the 8 innermost cells.
    debug_assert!(!local.is_empty());

    let per_cell = magnetization.vector() * (shape.volume() / local.len() as f64);
    Ok(local.into_iter().map(|c| DipoleSource { position: position + rotation.apply(&c), moment: per_cell }).collect())
}
