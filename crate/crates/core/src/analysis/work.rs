//! Closed-loop work integrals and the curl-of-force identity for the
//! magnetic Lorentz force `F = q v × B`.

use std::f64::consts::TAU;

use crate::error::UsageError;
use crate::field::{curl, directional_derivative, FieldError, VectorField};
use crate::geometry::Vec3;

/// Fewest quadrature segments accepted for a loop.
pub const MIN_LOOP_SEGMENTS: usize = 16;

/// Tolerance on the gap between the first and last polyline vertex.
const CLOSURE_TOL: f64 = 1e-12;

/// A closed integration path.
#[derive(Debug, Clone, PartialEq)]
pub enum LoopPath {
    /// Vertices with the first repeated as the last.
    Polyline(Vec<Vec3>),
    /// Circle through `center + radius (cos t u + sin t v)`; `u`, `v` orthonormal.
    Circle { center: Vec3, u: Vec3, v: Vec3, radius: f64 },
}

impl LoopPath {
    /// Circle in the plane with normal `normal`, counter-clockwise seen from its tip.
    pub fn circle(center: Vec3, normal: Vec3, radius: f64) -> Result<Self, UsageError> {
        let n = normal.try_normalize(0.0).ok_or_else(|| UsageError::new("loop normal must be nonzero"))?;
        if !(radius.is_finite() && radius > 0.0) {
            return Err(UsageError::new("loop radius must be positive"));
        }
        let helper = if n.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
        let u = (helper - n * n.dot(&helper)).normalize();
        let v = n.cross(&u);
        Ok(LoopPath::Circle { center, u, v, radius })
    }

    /// Arc length of the loop.
    pub fn length(&self) -> f64 {
        match self {
            LoopPath::Polyline(pts) => pts.windows(2).map(|w| (w[1] - w[0]).norm()).sum(),
            LoopPath::Circle { radius, .. } => TAU * radius,
        }
    }

    /// `(midpoint, Δr)` per quadrature segment. Polyline edges are split
    /// into equal pieces so that at least `segments` pieces result. A circle
    /// is split into equal angles `Δt`, each evaluated at its angular midpoint
    /// with `Δr = γ'(t) Δt`, the midpoint rule for `∮ F(γ(t))·γ'(t) dt`.
    fn segments(&self, segments: usize) -> Result<Vec<(Vec3, Vec3)>, UsageError> {
        match self {
            LoopPath::Polyline(pts) => {
                if pts.len() < 3 {
                    return Err(UsageError::new("a loop polyline needs at least three vertices"));
                }
                let (first, last) = (pts[0], pts[pts.len() - 1]);
                if (last - first).norm() > CLOSURE_TOL {
                    return Err(UsageError::new("loop polyline is not closed (first and last points differ)"));
                }
                let edges = pts.len() - 1;
                let per_edge = segments.div_ceil(edges);
                let mut out = Vec::with_capacity(per_edge * edges);
                for w in pts.windows(2) {
                    let step = (w[1] - w[0]) / per_edge as f64;
                    for k in 0..per_edge {
                        out.push((w[0] + step * (k as f64 + 0.5), step));
                    }
                }
                Ok(out)
            }
            LoopPath::Circle { center, u, v, radius } => {
                let dt = TAU / segments as f64;
                Ok((0..segments)
                    .map(|k| {
                        let t = dt * (k as f64 + 0.5);
                        let p = center + (u * t.cos() + v * t.sin()) * *radius;
                        (p, (v * t.cos() - u * t.sin()) * (radius * dt))
                    })
                    .collect())
            }
        }
    }
}

/// Midpoint-rule work estimate with its refinement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkEstimate {
    /// Work over `segments` segments.
    pub work: f64,
    /// Work over twice as many segments.
    pub refined: f64,
    pub segments: usize,
}

impl WorkEstimate {
    /// `|refined − work|`, the observable discretization error.
    pub fn refinement_change(&self) -> f64 {
        (self.refined - self.work).abs()
    }
}

/// `W = Σ F(midpoint, v)·Δr` around `path`, where the velocity at each
/// midpoint is `speed(midpoint)` along the segment direction.
pub fn work_integral<F, S>(force: F, path: &LoopPath, segments: usize, speed: S) -> Result<WorkEstimate, FieldError>
where
    F: Fn(&Vec3, &Vec3) -> Result<Vec3, FieldError>,
    S: Fn(&Vec3) -> f64,
{
    if segments < MIN_LOOP_SEGMENTS {
        return Err(UsageError::new(format!("a loop needs at least {MIN_LOOP_SEGMENTS} segments")).into());
    }
    let sum = |pieces: &[(Vec3, Vec3)]| -> Result<f64, FieldError> {
        let mut w = 0.0;
        for (mid, dr) in pieces {
            let v = dr.normalize() * speed(mid);
            w += force(mid, &v)?.dot(dr);
        }
        Ok(w)
    };
    let coarse = path.segments(segments)?;
    let fine = path.segments(2 * coarse.len())?;
    let (work, refined) = (sum(&coarse)?, sum(&fine)?);
    Ok(WorkEstimate { work, refined, segments: coarse.len() })
}

/// The magnetic Lorentz force `q v × B` for a fixed velocity.
pub struct ForceField<F> {
    pub field: F,
    pub q: f64,
    pub v: Vec3,
}

impl<F: VectorField> VectorField for ForceField<F> {
    fn field(&self, p: &Vec3) -> Result<Vec3, FieldError> {
        Ok(self.v.cross(&self.field.field(p)?) * self.q)
    }
    fn clearance(&self, p: &Vec3) -> Option<f64> {
        self.field.clearance(p)
    }
    fn check_segment(&self, a: &Vec3, b: &Vec3) -> Result<(), FieldError> {
        self.field.check_segment(a, b)
    }
}

/// Largest mismatch between the finite-difference curl of `q v × B` and
/// `−q (v·∇)B` over `samples`, normalized by `q |v| |B(p)| / length`.
///
/// For a constant velocity `∇×(v×B) = v (∇·B) − (v·∇)B`, so the residual is
/// the discrete divergence of `B` and shrinks as `h²`.
pub fn curl_force_check<F: VectorField + ?Sized>(
    field: &F,
    q: f64,
    v: &Vec3,
    samples: &[Vec3],
    h: f64,
    length: f64,
) -> Result<f64, FieldError> {
    if q == 0.0 || v.norm() == 0.0 {
        return Ok(0.0);
    }
    let force = ForceField { field, q, v: *v };
    let mut worst: f64 = 0.0;
    for p in samples {
        let lhs = curl(&force, p, h)?;
        let rhs = -directional_derivative(field, p, v, h)? * q;
        let b = field.field(p)?.norm();
        let scale = q.abs() * v.norm() * b / length;
        let diff = (lhs - rhs).norm();
        if diff == 0.0 {
            continue;
        }
        worst = worst.max(diff / scale);
    }
    Ok(worst)
}
