//! Field-line tracing with fixed-step RK4 on the unit tangent `B/|B|`.
//!
//! Integrating the normalized field keeps the arc-length step uniform across
//! the `1/r³` dynamic range of dipole fields. A line stops when it leaves the
//! bounding box, comes within one step of a singular region, returns to its
//! seed with an aligned tangent, or runs out of steps.

use rayon::prelude::*;
use thiserror::Error;

use crate::error::UsageError;
use crate::field::{FieldError, VectorField};
use crate::geometry::{is_finite, Aabb, Vec3};

/// Minimum number of steps before closure is tested.
pub const MIN_CLOSURE_STEPS: usize = 10;
/// Required tangent alignment `t·t_seed` for a closed loop.
pub const CLOSURE_ALIGNMENT: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    LeftBounds,
    HitSingularity,
    MaxSteps,
    ClosedLoop,
}

impl Termination {
    pub fn name(&self) -> &'static str {
        match self {
            Termination::LeftBounds => "left_bounds",
            Termination::HitSingularity => "hit_singularity",
            Termination::MaxSteps => "max_steps",
            Termination::ClosedLoop => "closed_loop",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegratorConfig {
    /// Arc-length step, m.
    pub step: f64,
    pub max_steps: usize,
    pub bounds: Aabb,
    /// Distance to the seed that counts as a closed loop, m. The line must
    /// first have moved more than twice this far from the seed.
    pub closure_eps: f64,
    pub direction: Direction,
}

impl IntegratorConfig {
    /// Defaults: step = bounds diagonal / 2000, closure radius = one step,
    /// 100 000 steps, forward.
    pub fn new(bounds: Aabb) -> Self {
        let step = bounds.diagonal() / 2000.0;
        IntegratorConfig { step, max_steps: 100_000, bounds, closure_eps: step, direction: Direction::Forward }
    }

    pub fn validate(&self) -> Result<(), UsageError> {
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(UsageError::new("integrator step must be positive"));
        }
        if self.max_steps == 0 {
            return Err(UsageError::new("max_steps must be at least 1"));
        }
        if !(self.closure_eps.is_finite() && self.closure_eps > 0.0) {
            return Err(UsageError::new("closure_eps must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Streamline {
    pub points: Vec<Vec3>,
    /// How the forward leg ended (the only leg for one-way traces).
    pub termination: Termination,
    /// How the backward leg ended, for [`Direction::Both`].
    pub backward_termination: Option<Termination>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TraceError {
    #[error("degenerate seed: field vanishes at ({:.6e}, {:.6e}, {:.6e})", seed[0], seed[1], seed[2])]
    DegenerateSeed { seed: [f64; 3] },
    #[error("seed cannot be traced: {0}")]
    Field(#[from] FieldError),
    #[error("usage error: {0}")]
    Usage(#[from] UsageError),
}

struct Leg {
    points: Vec<Vec3>,
    termination: Termination,
}

fn unit_tangent<F: VectorField + ?Sized>(field: &F, p: &Vec3, sign: f64) -> Option<Vec3> {
    let b = field.field(p).ok()?;
    let n = b.norm();
    (n > 0.0 && n.is_finite()).then(|| b * (sign / n))
}

fn near_singularity<F: VectorField + ?Sized>(field: &F, p: &Vec3, step: f64) -> bool {
    field.clearance(p).is_some_and(|c| c < step)
}

fn trace_leg<F: VectorField + ?Sized>(field: &F, seed: &Vec3, t0: Vec3, sign: f64, cfg: &IntegratorConfig) -> Leg {
    let h = cfg.step;
    let mut points = Vec::new();
    let mut p = *seed;
    let mut k1 = t0;
    let mut departed = false;
    for n in 1..=cfg.max_steps {
        if near_singularity(field, &p, h) {
            return Leg { points, termination: Termination::HitSingularity };
        }
        let step = (|| {
            let k2 = unit_tangent(field, &(p + k1 * (h / 2.0)), sign)?;
            let k3 = unit_tangent(field, &(p + k2 * (h / 2.0)), sign)?;
            let k4 = unit_tangent(field, &(p + k3 * h), sign)?;
            Some((k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0))
        })();
        let Some(delta) = step else {
            return Leg { points, termination: Termination::HitSingularity };
        };
        let next = p + delta;
        if !cfg.bounds.contains(&next) {
            return Leg { points, termination: Termination::LeftBounds };
        }
        points.push(next);
        let Some(t_next) = unit_tangent(field, &next, sign) else {
            return Leg { points, termination: Termination::HitSingularity };
        };
        let gap = (next - seed).norm();
        departed |= gap > 2.0 * cfg.closure_eps;
        if departed && n >= MIN_CLOSURE_STEPS && gap < cfg.closure_eps && t_next.dot(&t0) > CLOSURE_ALIGNMENT {
            return Leg { points, termination: Termination::ClosedLoop };
        }
        p = next;
        k1 = t_next;
    }
    Leg { points, termination: Termination::MaxSteps }
}

/// Traces the field line through `seed`.
pub fn trace<F: VectorField + ?Sized>(
    field: &F,
    seed: &Vec3,
    cfg: &IntegratorConfig,
) -> Result<Streamline, TraceError> {
    cfg.validate()?;
    if !is_finite(seed) || !cfg.bounds.contains(seed) {
        return Err(UsageError::new("seed must lie inside the integration bounds").into());
    }
    let b = field.field(seed)?;
    if b.norm() == 0.0 {
        return Err(TraceError::DegenerateSeed { seed: (*seed).into() });
    }
    let t = b.normalize();

    match cfg.direction {
        Direction::Forward | Direction::Backward => {
            let sign = if cfg.direction == Direction::Forward { 1.0 } else { -1.0 };
            let leg = trace_leg(field, seed, t * sign, sign, cfg);
            let mut points = Vec::with_capacity(leg.points.len() + 1);
            points.push(*seed);
            points.extend(leg.points);
            Ok(Streamline { points, termination: leg.termination, backward_termination: None })
        }
        Direction::Both => {
            let back = trace_leg(field, seed, -t, -1.0, cfg);
            let fwd = trace_leg(field, seed, t, 1.0, cfg);
            let mut points: Vec<Vec3> = back.points.into_iter().rev().collect();
            points.push(*seed);
            points.extend(fwd.points);
            Ok(Streamline { points, termination: fwd.termination, backward_termination: Some(back.termination) })
        }
    }
}

/// `n` seeds equally spaced on a circle, starting from the projection of +x
/// (or +y when the normal is along x) onto the circle's plane and turning
/// counter-clockwise about `normal`.
pub fn seed_ring(center: &Vec3, normal: &Vec3, radius: f64, n: usize) -> Result<Vec<Vec3>, UsageError> {
    if n == 0 {
        return Err(UsageError::new("seed ring needs at least one seed"));
    }
    if !(radius.is_finite() && radius > 0.0) {
        return Err(UsageError::new("seed ring radius must be positive"));
    }
    if !is_finite(normal) || normal.norm() == 0.0 || !is_finite(center) {
        return Err(UsageError::new("seed ring normal must be finite and nonzero"));
    }
    let nhat = normal.normalize();
    let mut u = Vec3::x() - nhat * nhat.x;
    if u.norm() < 1e-6 {
        u = Vec3::y() - nhat * nhat.y;
    }
    let u = u.normalize();
    let v = nhat.cross(&u);
    Ok((0..n)
        .map(|k| {
            let a = std::f64::consts::TAU * k as f64 / n as f64;
            center + (u * a.cos() + v * a.sin()) * radius
        })
        .collect())
}

/// Traces every seed; output order follows input order and one failing seed
/// does not abort the others.
pub fn trace_set<F: VectorField + ?Sized>(
    field: &F,
    seeds: &[Vec3],
    cfg: &IntegratorConfig,
) -> Vec<Result<Streamline, TraceError>> {
    seeds.par_iter().map(|s| trace(field, s, cfg)).collect()
}
