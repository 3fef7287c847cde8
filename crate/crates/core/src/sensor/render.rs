use std::f64::consts::TAU;

use rayon::prelude::*;

use super::{ParticleSpec, SensorError};
use crate::error::UsageError;
use crate::field::{GridSpec, VectorField};
use crate::geometry::{is_finite, Rotation, Vec3};

/// Below this argument the Langevin function is evaluated by its series.
const LANGEVIN_SERIES_LIMIT: f64 = 0.1;

/// `L(x) = coth(x) − 1/x`, odd, with `L(0) = 0`.
pub fn langevin(x: f64) -> f64 {
    if x.abs() < LANGEVIN_SERIES_LIMIT {
        let x2 = x * x;
        x * (1.0 / 3.0 + x2 * (-1.0 / 45.0 + x2 * (2.0 / 945.0 + x2 * (-1.0 / 4725.0 + x2 * (2.0 / 93555.0)))))
    } else {
        1.0 / x.tanh() - 1.0 / x
    }
}

/// Equilibrium alignment `L(m_p |B| / kT)` of a particle in field `b`.
pub fn alignment(b: &Vec3, spec: &ParticleSpec) -> f64 {
    langevin(spec.particle_moment * b.norm() / spec.thermal_energy()).clamp(0.0, 1.0)
}

/// Sensor film: a pixel grid on a posed plane plus the film metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorSpec {
    pub center: Vec3,
    /// Pixel axes are the rotated x and y axes; the film normal is rotated z.
    pub orientation: Rotation,
    pub nx: usize,
    pub ny: usize,
    pub pixel_pitch: f64,
    pub film_thickness: f64,
    /// Particle volume fraction.
    pub concentration: f64,
    /// Pixels with `|B|` below this are idle, T.
    pub b_min: f64,
}

impl SensorSpec {
    /// Horizontal film centered at `center` with the default film metadata:
    /// 37.5 µm thick, 0.75 % particles, 15 mT threshold.
    pub fn new(center: Vec3, nx: usize, ny: usize, pixel_pitch: f64) -> Self {
        SensorSpec {
            center,
            orientation: Rotation::identity(),
            nx,
            ny,
            pixel_pitch,
            film_thickness: 37.5e-6,
            concentration: 0.0075,
            b_min: 0.015,
        }
    }

    pub fn validate(&self) -> Result<(), UsageError> {
        if self.nx < 8 || self.ny < 8 {
            return Err(UsageError::new("sensor needs at least 8x8 pixels"));
        }
        if !(self.pixel_pitch.is_finite() && self.pixel_pitch > 0.0) {
            return Err(UsageError::new("pixel pitch must be positive"));
        }
        if !(self.film_thickness.is_finite() && self.film_thickness > 0.0) {
            return Err(UsageError::new("film thickness must be positive"));
        }
        if !(self.concentration > 0.0 && self.concentration < 1.0) {
            return Err(UsageError::new("concentration must lie strictly between 0 and 1"));
        }
        if !(self.b_min.is_finite() && self.b_min >= 0.0) {
            return Err(UsageError::new("threshold field must be >= 0"));
        }
        if !is_finite(&self.center) {
            return Err(UsageError::new("sensor center must be finite"));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<GridSpec, UsageError> {
        let u = self.orientation.apply(&Vec3::x());
        let v = self.orientation.apply(&Vec3::y());
        GridSpec::plane(self.center, u, v, self.nx, self.ny, self.pixel_pitch)
    }
}

/// Per-pixel in-plane field angle and alignment, row-major with x fastest.
/// Masked pixels hold the idle value (angle 0, magnitude 0).
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseImage {
    pub nx: usize,
    pub ny: usize,
    pub angle: Vec<f64>,
    pub magnitude: Vec<f64>,
    pub masked: Vec<bool>,
}

impl ResponseImage {
    pub fn mask_count(&self) -> usize {
        self.masked.iter().filter(|m| **m).count()
    }
}

/// Renders the film's response to `source`.
pub fn render_response<F: VectorField + ?Sized>(
    source: &F,
    sensor: &SensorSpec,
    particle: &ParticleSpec,
) -> Result<ResponseImage, SensorError> {
    sensor.validate()?;
    particle.validate()?;
    let grid = sensor.grid()?;
    let (u, v) = (grid.axes[0], grid.axes[1]);

    let pixels: Vec<Option<(f64, f64, bool)>> = (0..grid.len())
        .into_par_iter()
        .map(|n| {
            let b = source.field(&grid.node(&grid.index(n))).ok()?;
            if b.norm() < sensor.b_min {
                return Some((0.0, 0.0, true));
            }
            let mut a = b.dot(&v).atan2(b.dot(&u));
            if a < 0.0 {
                a += TAU;
            }
            if a >= TAU {
                a = 0.0;
            }
            Some((a, alignment(&b, particle), false))
        })
        .collect();

    let blocked = pixels.iter().filter(|p| p.is_none()).count();
    if blocked > 0 {
        return Err(SensorError::Geometry(format!(
            "sensor plane intersects source exclusion zones at {blocked} pixel(s)"
        )));
    }
    let mut img = ResponseImage {
        nx: sensor.nx,
        ny: sensor.ny,
        angle: Vec::with_capacity(pixels.len()),
        magnitude: Vec::with_capacity(pixels.len()),
        masked: Vec::with_capacity(pixels.len()),
    };
    for (a, m, masked) in pixels.into_iter().flatten() {
        img.angle.push(a);
        img.magnitude.push(m);
        img.masked.push(masked);
    }
    Ok(img)
}
