//! Numerical conservativity suite: divergence, curl of H, closed-loop work
//! of the magnetic force, curl-of-force identity and potential-gradient
//! consistency, combined into one report.

use std::f64::consts::TAU;

use rayon::prelude::*;

use super::work::{curl_force_check, work_integral, LoopPath};
use crate::constants::MU0;
use crate::error::UsageError;
use crate::field::{curl, divergence, scalar_potential, FieldError, HField, VectorField};
use crate::geometry::Vec3;

/// Segments per loop in the work check.
const LOOP_SEGMENTS: usize = 256;
/// Simpson panels per potential segment.
const POTENTIAL_PANELS: usize = 200;
/// Points used by the costlier curl-of-force and potential checks.
const SUBSET: usize = 50;

/// Spherical shell sampled quasi-randomly.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub center: Vec3,
    pub inner_radius: f64,
    pub outer_radius: f64,
    pub samples: usize,
}

fn radical_inverse(mut i: usize, base: usize) -> f64 {
    let (mut inv, mut f) = (0.0, 1.0 / base as f64);
    while i > 0 {
        inv += f * (i % base) as f64;
        i /= base;
        f /= base as f64;
    }
    inv
}

impl Region {
    pub fn validate(&self) -> Result<(), UsageError> {
        if !(self.inner_radius > 0.0 && self.outer_radius >= self.inner_radius && self.outer_radius.is_finite()) {
            return Err(UsageError::new("region needs 0 < inner radius <= outer radius"));
        }
        if self.samples == 0 {
            return Err(UsageError::new("region needs at least one sample"));
        }
        Ok(())
    }

    /// Halton points (bases 2, 3, 5) mapped uniformly by volume into the shell.
    pub fn points(&self) -> Vec<Vec3> {
        let (a3, b3) = (self.inner_radius.powi(3), self.outer_radius.powi(3));
        (1..=self.samples)
            .map(|i| {
                let r = (a3 + radical_inverse(i, 2) * (b3 - a3)).cbrt();
                let cos_t = 1.0 - 2.0 * radical_inverse(i, 3);
                let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
                let phi = TAU * radical_inverse(i, 5);
                self.center + Vec3::new(sin_t * phi.cos(), sin_t * phi.sin(), cos_t) * r
            })
            .collect()
    }
}

/// Per-check acceptance thresholds, all on normalized quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub divergence: f64,
    pub curl: f64,
    pub work: f64,
    pub curl_force: f64,
    pub potential: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { divergence: 1e-6, curl: 1e-6, work: 1e-12, curl_force: 1e-4, potential: 1e-4 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
    /// `None` when the check was not run.
    pub passed: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConservativityReport {
    /// `max |∇·B| · L / |B|`.
    pub max_abs_div: f64,
    /// `max |∇×H| · L / |H|`.
    pub max_abs_curl_h: f64,
    /// `max |W| / (q · max|v| · max|B| · loop length)` over loops, if any were given.
    pub closed_loop_work: Option<f64>,
    pub loop_segments: usize,
    /// Normalized `max |∇×F + q (v·∇)B|`.
    pub curl_force_residual: f64,
    /// Largest relative mismatch between `−∇ψ` and `H`.
    pub potential_residual: f64,
    pub checks: Vec<CheckOutcome>,
    pub notes: Vec<String>,
}

impl ConservativityReport {
    /// True when every check that ran passed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed != Some(false))
    }
}

/// Three circles of radius `radius` about `center`, one per coordinate plane.
pub fn default_loops(center: Vec3, radius: f64) -> Result<Vec<LoopPath>, UsageError> {
    [Vec3::z(), Vec3::x(), Vec3::y()].into_iter().map(|n| LoopPath::circle(center, n, radius)).collect()
}

/// Runs every check over `region` with finite-difference step `h`, using
/// `length` as the normalizing length scale.
pub fn conservativity_report<F: VectorField + ?Sized>(
    field: &F,
    region: &Region,
    loops: &[LoopPath],
    length: f64,
    h: f64,
    tolerances: &Tolerances,
) -> Result<ConservativityReport, FieldError> {
    region.validate()?;
    if !(length.is_finite() && length > 0.0) {
        return Err(UsageError::new("normalizing length must be positive").into());
    }
    let points = region.points();

    let local: Vec<(f64, f64)> = points
        .par_iter()
        .map(|p| -> Result<(f64, f64), FieldError> {
            let b = field.field(p)?.norm();
            if b == 0.0 {
                return Ok((0.0, 0.0));
            }
            let div = divergence(field, p, h)?.abs() * length / b;
            // curl H = curl B / μ0, |H| = |B| / μ0
            let c = curl(&HField(field), p, h)?;
            Ok((div, c.norm() * length * MU0 / b))
        })
        .collect::<Result<_, _>>()?;
    let max_abs_div = local.iter().map(|l| l.0).fold(0.0, f64::max);
    let max_abs_curl_h = local.iter().map(|l| l.1).fold(0.0, f64::max);

    let (closed_loop_work, loop_segments) = if loops.is_empty() {
        (None, 0)
    } else {
        let mut worst: f64 = 0.0;
        let mut segments = 0;
        for path in loops {
            let (w, bmax) = loop_work(field, path)?;
            segments = w.segments;
            let scale = bmax * path.length();
            if scale > 0.0 {
                worst = worst.max(w.work.abs().max(w.refined.abs()) / scale);
            }
        }
        (Some(worst), segments)
    };

    let subset: Vec<Vec3> = points.iter().step_by(points.len().div_ceil(SUBSET)).copied().collect();
    let curl_force_residual = curl_force_check(field, 1.0, &Vec3::x(), &subset, h, length)?;
    let potential_residual = potential_check(field, region, &subset, h)?;

    let mut checks = vec![
        outcome("divergence", max_abs_div, tolerances.divergence),
        outcome("curl_h", max_abs_curl_h, tolerances.curl),
    ];
    checks.push(match closed_loop_work {
        Some(w) => outcome("closed_loop_work", w, tolerances.work),
        None => CheckOutcome { name: "closed_loop_work", value: 0.0, tolerance: tolerances.work, passed: None },
    });
    checks.push(outcome("curl_force", curl_force_residual, tolerances.curl_force));
    checks.push(outcome("potential_gradient", potential_residual, tolerances.potential));

    let notes = checks
        .iter()
        .map(|c| match c.passed {
            Some(true) => format!("{}: passed ({:.3e} <= {:.1e})", c.name, c.value, c.tolerance),
            Some(false) => format!("{}: FAILED ({:.3e} > {:.1e})", c.name, c.value, c.tolerance),
            None => format!("{}: not run (no loops given)", c.name),
        })
        .collect();

    Ok(ConservativityReport {
        max_abs_div,
        max_abs_curl_h,
        closed_loop_work,
        loop_segments,
        curl_force_residual,
        potential_residual,
        checks,
        notes,
    })
}

fn outcome(name: &'static str, value: f64, tolerance: f64) -> CheckOutcome {
    CheckOutcome { name, value, tolerance, passed: Some(value.is_finite() && value <= tolerance) }
}

/// Unit-charge, unit-speed tangent-velocity work of `v × B` around `path`,
/// with the largest `|B|` met.
fn loop_work<F: VectorField + ?Sized>(field: &F, path: &LoopPath) -> Result<(super::WorkEstimate, f64), FieldError> {
    let bmax = std::cell::Cell::new(0.0f64);
    let w = work_integral(
        |p, v| {
            let b = field.field(p)?;
            bmax.set(bmax.get().max(b.norm()));
            Ok(v.cross(&b))
        },
        path,
        LOOP_SEGMENTS,
        |_| 1.0,
    )?;
    Ok((w, bmax.get()))
}

/// Relative mismatch of `−∇ψ` against `H`, with `ψ` integrated inward along
/// the radial line from a reference point on the region's outer boundary
/// scaled by 1.5.
fn potential_check<F: VectorField + ?Sized>(
    field: &F,
    region: &Region,
    samples: &[Vec3],
    h: f64,
) -> Result<f64, FieldError> {
    let hf = HField(field);
    let mut worst: f64 = 0.0;
    for p in samples {
        let radial = (p - region.center).normalize();
        let reference = region.center + radial * (1.5 * region.outer_radius);
        let hp = hf.field(p)?;
        if hp.norm() == 0.0 {
            continue;
        }
        let mut grad = Vec3::zeros();
        for axis in 0..3 {
            let mut e = Vec3::zeros();
            e[axis] = h;
            let plus = scalar_potential(&hf, &reference, &(p + e), POTENTIAL_PANELS)?;
            let minus = scalar_potential(&hf, &reference, &(p - e), POTENTIAL_PANELS)?;
            grad[axis] = (plus - minus) / (2.0 * h);
        }
        worst = worst.max((-grad - hp).norm() / hp.norm());
    }
    Ok(worst)
}
