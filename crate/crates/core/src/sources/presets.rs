//! Named magnet assemblies: linear Halbach array, skewed plate ring,
//! close-packed sphere lattices and a forced-polarity disk grid.
//!
//! Magnets touch (pitch equals the characteristic dimension) unless a gap is given.

use std::f64::consts::PI;

use nalgebra::Matrix3;

use super::{Assembly, MagnetShape, PlacedMagnet, UniformMagnetization};
use crate::constants::N42_REMANENCE;
use crate::error::{Error, GeometryError, UsageError};
use crate::geometry::{Rotation, Vec3};

/// Default cells per axis for preset assemblies.
pub const DEFAULT_RESOLUTION: usize = 5;

/// Linear Halbach array along x. Magnetization turns by 90° per element
/// through +y, +x, −y, −x; element 0 sits at the +x end, which puts the
/// reinforced face on the +y side.
#[derive(Debug, Clone, PartialEq)]
pub struct HalbachParams {
    pub n: usize,
    pub element: MagnetShape,
    pub gap: f64,
    pub remanence: f64,
    pub resolution: usize,
}

impl Default for HalbachParams {
    fn default() -> Self {
        HalbachParams {
            n: 5,
            element: MagnetShape::Cuboid { lx: 1e-2, ly: 1e-2, lz: 1e-2 },
            gap: 0.0,
            remanence: N42_REMANENCE,
            resolution: DEFAULT_RESOLUTION,
        }
    }
}

/// Magnetization direction of element `k` in a linear Halbach sequence.
pub fn halbach_direction(k: usize) -> Vec3 {
    match k % 4 {
        0 => Vec3::y(),
        1 => Vec3::x(),
        2 => -Vec3::y(),
        _ => -Vec3::x(),
    }
}

pub fn build_halbach_linear(p: &HalbachParams) -> Result<Assembly, Error> {
    if p.n < 3 {
        return Err(UsageError::new("a Halbach array needs at least 3 elements").into());
    }
    check_gap(p.gap)?;
    let pitch = 2.0 * p.element.validated()?.half_extents().x + p.gap;
    let mid = (p.n - 1) as f64 / 2.0;
    let magnets = (0..p.n)
        .map(|k| {
            PlacedMagnet::new(
                p.element,
                Vec3::new((mid - k as f64) * pitch, 0.0, 0.0),
                Rotation::identity(),
                UniformMagnetization::from_remanence(halbach_direction(k), p.remanence)?,
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Assembly::discretize(magnets, p.resolution)?)
}

/// Ring of vertical plates. Plate `i` sits at azimuth `2πi/n` on a circle of
/// `ring_radius` in the z = 0 plane, its thickness axis radial, its local y
/// axis vertical, magnetized radially outward, then turned by `skew` about
/// the radial axis.
#[derive(Debug, Clone, PartialEq)]
pub struct RingParams {
    pub n: usize,
    pub plate: MagnetShape,
    pub ring_radius: f64,
    pub skew: f64,
    pub remanence: f64,
    pub resolution: usize,
}

impl Default for RingParams {
    fn default() -> Self {
        RingParams {
            n: 12,
            plate: MagnetShape::Plate { lx: 1e-2, ly: 1e-2, thickness: 1e-3 },
            ring_radius: 3e-2,
            skew: 15f64.to_radians(),
            remanence: N42_REMANENCE,
            resolution: DEFAULT_RESOLUTION,
        }
    }
}

pub fn build_ring_twister(p: &RingParams) -> Result<Assembly, Error> {
    if p.n < 3 {
        return Err(UsageError::new("a ring needs at least 3 plates").into());
    }
    let plate = p.plate.validated()?;
    let h = plate.half_extents();
    let extent = 2.0 * h.x.max(h.y);
    if !p.ring_radius.is_finite() || p.ring_radius <= extent {
        return Err(UsageError::new(format!(
            "ring radius {} m must exceed the plate extent {} m",
            p.ring_radius, extent
        ))
        .into());
    }
    if !p.skew.is_finite() {
        return Err(UsageError::new("skew must be finite").into());
    }
    let spacing = 2.0 * p.ring_radius * (PI / p.n as f64).sin();
    let diagonal = 2.0 * (h.x * h.x + h.y * h.y).sqrt();
    if spacing < diagonal {
        return Err(GeometryError(format!(
            "plates overlap: center spacing {spacing:.6e} m is below the plate diagonal {diagonal:.6e} m"
        ))
        .into());
    }

    let magnets = (0..p.n)
        .map(|i| {
            let phi = 2.0 * PI * i as f64 / p.n as f64;
            let radial = Vec3::new(phi.cos(), phi.sin(), 0.0);
            let tangent = Vec3::new(-phi.sin(), phi.cos(), 0.0);
            let base = Rotation::from_matrix(Matrix3::from_columns(&[tangent, Vec3::z(), radial]))?;
            let pose = Rotation::about_axis(radial, p.skew)?.compose(&base);
            PlacedMagnet::new(
                plate,
                radial * p.ring_radius,
                pose,
                UniformMagnetization::from_remanence(radial, p.remanence)?,
            )
        })
        .collect::<Result<Vec<_>, UsageError>>()?;
    Ok(Assembly::discretize(magnets, p.resolution)?)
}

/// Moment orientations for the sphere lattices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentPattern {
    /// Every sphere along +z.
    AllUp,
    /// In-plane, +x on even rows and −x on odd rows.
    AlternatingInPlane,
}

/// Close-packed monolayer of spheres in the z = 0 plane, centroid at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeParams {
    pub count: usize,
    pub sphere_d: f64,
    pub pattern: MomentPattern,
    pub remanence: f64,
    pub resolution: usize,
}

impl Default for LatticeParams {
    fn default() -> Self {
        LatticeParams {
            count: 19,
            sphere_d: 5e-3,
            pattern: MomentPattern::AllUp,
            remanence: N42_REMANENCE,
            resolution: DEFAULT_RESOLUTION,
        }
    }
}

/// Row lengths of the supported packings: hexagon 3-4-5-4-3 or triangle 1..6.
pub fn lattice_rows(count: usize) -> Result<&'static [usize], UsageError> {
    match count {
        19 => Ok(&[3, 4, 5, 4, 3]),
        21 => Ok(&[1, 2, 3, 4, 5, 6]),
        _ => Err(UsageError::new(format!("unsupported lattice count {count}; expected 19 or 21"))),
    }
}

pub fn build_triangular_lattice(p: &LatticeParams) -> Result<Assembly, Error> {
    let rows = lattice_rows(p.count)?;
    let shape = MagnetShape::sphere(p.sphere_d / 2.0)?;
    let row_step = p.sphere_d * 3f64.sqrt() / 2.0;

    let mut centers = Vec::with_capacity(p.count);
    for (r, &len) in rows.iter().enumerate() {
        let y = r as f64 * row_step;
        for j in 0..len {
            centers.push((r, Vec3::new((j as f64 - (len - 1) as f64 / 2.0) * p.sphere_d, y, 0.0)));
        }
    }
    let centroid = centers.iter().map(|(_, c)| c).sum::<Vec3>() / centers.len() as f64;

    let magnets = centers
        .into_iter()
        .map(|(row, c)| {
            let dir = match p.pattern {
                MomentPattern::AllUp => Vec3::z(),
                MomentPattern::AlternatingInPlane if row % 2 == 0 => Vec3::x(),
                MomentPattern::AlternatingInPlane => -Vec3::x(),
            };
            PlacedMagnet::new(
                shape,
                c - centroid,
                Rotation::identity(),
                UniformMagnetization::from_remanence(dir, p.remanence)?,
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Assembly::discretize(magnets, p.resolution)?)
}

/// Named ±z layouts for [`GridParams::orientations`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridPattern {
    AllUp,
    Checkerboard,
}

impl GridPattern {
    /// Row-major `+1`/`-1` orientation list.
    pub fn orientations(&self, rows: usize, cols: usize) -> Vec<i8> {
        (0..rows)
            .flat_map(|r| (0..cols).map(move |c| (r, c)))
            .map(|(r, c)| match self {
                GridPattern::AllUp => 1,
                GridPattern::Checkerboard if (r + c) % 2 == 0 => 1,
                GridPattern::Checkerboard => -1,
            })
            .collect()
    }
}

/// Rectangular grid of axially magnetized disks lying in the z = 0 plane,
/// row `r` at y increasing with `r`, column `c` at x increasing with `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridParams {
    pub rows: usize,
    pub cols: usize,
    pub disk: MagnetShape,
    /// Row-major, `+1` for +z and `-1` for −z.
    pub orientations: Vec<i8>,
    pub remanence: f64,
    pub gap: f64,
    pub resolution: usize,
}

impl Default for GridParams {
    fn default() -> Self {
        GridParams {
            rows: 4,
            cols: 4,
            disk: MagnetShape::Cylinder { radius: 5e-3, height: 4e-3 },
            orientations: GridPattern::Checkerboard.orientations(4, 4),
            remanence: N42_REMANENCE,
            gap: 0.0,
            resolution: DEFAULT_RESOLUTION,
        }
    }
}

pub fn build_grid_array(p: &GridParams) -> Result<Assembly, Error> {
    if p.rows == 0 || p.cols == 0 {
        return Err(UsageError::new("grid needs at least one row and one column").into());
    }
    if p.orientations.len() != p.rows * p.cols {
        return Err(UsageError::new(format!(
            "orientation pattern has {} entries, grid has {}",
            p.orientations.len(),
            p.rows * p.cols
        ))
        .into());
    }
    if p.orientations.iter().any(|o| *o != 1 && *o != -1) {
        return Err(UsageError::new("orientations must be +1 or -1").into());
    }
    check_gap(p.gap)?;
    let disk = p.disk.validated()?;
    let pitch = 2.0 * disk.half_extents().x.max(disk.half_extents().y) + p.gap;
    let (r0, c0) = ((p.rows - 1) as f64 / 2.0, (p.cols - 1) as f64 / 2.0);

    let mut magnets = Vec::with_capacity(p.rows * p.cols);
    for r in 0..p.rows {
        for c in 0..p.cols {
            let sign = f64::from(p.orientations[r * p.cols + c]);
            magnets.push(PlacedMagnet::new(
                disk,
                Vec3::new((c as f64 - c0) * pitch, (r as f64 - r0) * pitch, 0.0),
                Rotation::identity(),
                UniformMagnetization::from_remanence(Vec3::z() * sign, p.remanence)?,
            )?);
        }
    }
    Ok(Assembly::discretize(magnets, p.resolution)?)
}

/// One cube magnet at the origin magnetized along +z.
pub fn build_single_cube(edge: f64, remanence: f64, resolution: usize) -> Result<Assembly, Error> {
    let m = PlacedMagnet::new(
        MagnetShape::cube(edge)?,
        Vec3::zeros(),
        Rotation::identity(),
        UniformMagnetization::from_remanence(Vec3::z(), remanence)?,
    )?;
    Ok(Assembly::discretize(vec![m], resolution)?)
}

fn check_gap(gap: f64) -> Result<(), UsageError> {
    if gap.is_finite() && gap >= 0.0 {
        Ok(())
    } else {
        Err(UsageError::new("gap must be finite and >= 0"))
    }
}
