//! Central-difference differential operators and line-integral potentials.
//!
//! All stencils are second order: the truncation error of a central
//! difference with step `h` is `h²/6 · f'''`, so halving `h` divides it by 4
//! until floating-point cancellation (`~ε·|f|/h`) takes over.

use nalgebra::Matrix3;

use super::{FieldError, VectorField};
use crate::error::UsageError;
use crate::geometry::Vec3;

/// Default finite-difference step, `1e-4 ×` the characteristic length.
pub fn default_fd_step(length: f64) -> f64 {
    1e-4 * length
}

fn check_step(h: f64) -> Result<(), FieldError> {
    if h.is_finite() && h > 0.0 {
        Ok(())
    } else {
        Err(UsageError::new("finite-difference step must be positive").into())
    }
}

/// `J[(i, j)] = ∂F_i/∂x_j` by central differences.
pub fn jacobian<F: VectorField + ?Sized>(field: &F, p: &Vec3, h: f64) -> Result<Matrix3<f64>, FieldError> {
    check_step(h)?;
    let mut j = Matrix3::zeros();
    for axis in 0..3 {
        let mut e = Vec3::zeros();
        e[axis] = h;
        let fp = field.field(&(p + e))?;
        let fm = field.field(&(p - e))?;
        j.set_column(axis, &((fp - fm) / (2.0 * h)));
    }
    Ok(j)
}

/// `∇·F`, sum of the three axial central differences.
pub fn divergence<F: VectorField + ?Sized>(field: &F, p: &Vec3, h: f64) -> Result<f64, FieldError> {
    Ok(jacobian(field, p, h)?.trace())
}

/// `∇×F`, componentwise central differences.
pub fn curl<F: VectorField + ?Sized>(field: &F, p: &Vec3, h: f64) -> Result<Vec3, FieldError> {
    Ok(curl_of(&jacobian(field, p, h)?))
}

pub(crate) fn curl_of(j: &Matrix3<f64>) -> Vec3 {
    Vec3::new(j[(2, 1)] - j[(1, 2)], j[(0, 2)] - j[(2, 0)], j[(1, 0)] - j[(0, 1)])
}

/// `(d·∇)F` for a direction `d` (not normalized; the result scales with `|d|`).
pub fn directional_derivative<F: VectorField + ?Sized>(
    field: &F,
    p: &Vec3,
    d: &Vec3,
    h: f64,
) -> Result<Vec3, FieldError> {
    check_step(h)?;
    let len = d.norm();
    if len == 0.0 {
        return Ok(Vec3::zeros());
    }
    let e = d * (h / len);
    let fp = field.field(&(p + e))?;
    let fm = field.field(&(p - e))?;
    Ok((fp - fm) * (len / (2.0 * h)))
}

/// `ψ(p) = −∫ F·dl` along the straight segment from `reference` to `p`,
/// composite Simpson with `panels` (even) sub-intervals. `ψ(reference) = 0`.
pub fn scalar_potential<F: VectorField + ?Sized>(
    field: &F,
    reference: &Vec3,
    p: &Vec3,
    panels: usize,
) -> Result<f64, FieldError> {
    if panels == 0 || !panels.is_multiple_of(2) {
        return Err(UsageError::new("Simpson quadrature needs a positive even panel count").into());
    }
    let span = p - reference;
    if span.norm() == 0.0 {
        return Ok(0.0);
    }
    field.check_segment(reference, p)?;
    let dt = 1.0 / panels as f64;
    let mut acc = 0.0;
    for k in 0..=panels {
        let w = if k == 0 || k == panels {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let q = reference + span * (k as f64 * dt);
        acc += w * field.field(&q)?.dot(&span);
    }
    Ok(-acc * dt / 3.0)
}

/// [`scalar_potential`] accumulated over consecutive polyline segments.
pub fn scalar_potential_polyline<F: VectorField + ?Sized>(
    field: &F,
    route: &[Vec3],
    panels_per_segment: usize,
) -> Result<f64, FieldError> {
    if route.len() < 2 {
        return Err(UsageError::new("a route needs at least two points").into());
    }
    route.windows(2).try_fold(0.0, |acc, w| Ok(acc + scalar_potential(field, &w[0], &w[1], panels_per_segment)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FnField, HField, ModelField};
    use approx::assert_relative_eq;

    #[test]
    fn analytic_divergence_and_curl() {
        let radial = FnField(|p: &Vec3| *p);
        assert_relative_eq!(divergence(&radial, &Vec3::new(0.3, -1.0, 2.0), 1e-3).unwrap(), 3.0, epsilon = 1e-9);
        let swirl = FnField(|p: &Vec3| Vec3::new(-p.y, p.x, 0.0));
        assert_relative_eq!(
            curl(&swirl, &Vec3::new(0.3, -1.0, 2.0), 1e-3).unwrap(),
            Vec3::new(0.0, 0.0, 2.0),
            epsilon = 1e-9
        );
        let uniform = ModelField::Uniform { b: Vec3::new(1.0, 2.0, 3.0) };
        assert_eq!(divergence(&uniform, &Vec3::x(), 1e-4).unwrap(), 0.0);
        assert_eq!(curl(&uniform, &Vec3::x(), 1e-4).unwrap(), Vec3::zeros());
    }

    #[test]
    fn dipole_is_solenoidal_and_irrotational() {
        let m = ModelField::PointDipole { moment: Vec3::new(0.3, -0.2, 1.0), position: Vec3::zeros() };
        let p = Vec3::new(0.1, 0.07, 0.03);
        let b = m.field(&p).unwrap().norm();
        let l = p.norm();
        assert!(divergence(&m, &p, 1e-4).unwrap().abs() * l / b <= 1e-6);
        let h = default_fd_step(l);
        assert!(curl(&m, &p, h).unwrap().norm() * l / b <= 1e-6);
    }

    #[test]
    fn uniform_potential_is_linear() {
        let h0 = 250.0;
        let h = ModelField::Uniform { b: Vec3::new(0.0, 0.0, h0) };
        for z in [-2.0, 0.5, 3.0] {
            let psi = scalar_potential(&h, &Vec3::zeros(), &Vec3::new(0.0, 0.0, z), 8).unwrap();
            assert!((psi + h0 * z).abs() <= 1e-12 * h0.max(1.0) * z.abs().max(1.0));
        }
        assert_eq!(scalar_potential(&h, &Vec3::x(), &Vec3::x(), 8).unwrap(), 0.0);
        assert!(scalar_potential(&h, &Vec3::zeros(), &Vec3::x(), 7).is_err());
    }

    #[test]
    fn dipole_potential_is_path_independent() {
        let field = HField(ModelField::PointDipole { moment: Vec3::z(), position: Vec3::zeros() });
        let start = Vec3::new(0.2, 0.0, 0.1);
        let end = Vec3::new(-0.1, 0.15, 0.12);
        let direct = scalar_potential_polyline(&field, &[start, end], 400).unwrap();
        let detour =
            scalar_potential_polyline(&field, &[start, Vec3::new(0.2, 0.2, 0.3), Vec3::new(-0.2, 0.25, 0.2), end], 400)
                .unwrap();
        assert!((direct - detour).abs() <= 1e-6 * direct.abs(), "{direct} vs {detour}");
        // Closed form ψ = m·r / (4π r³) with H = -∇ψ.
        let exact = |p: &Vec3| p.z / (4.0 * std::f64::consts::PI * p.norm().powi(3));
        assert_relative_eq!(direct, exact(&end) - exact(&start), max_relative = 1e-9);
    }

    #[test]
    fn gradient_of_potential_recovers_h() {
        let field = HField(ModelField::PointDipole { moment: Vec3::new(0.1, 0.5, 1.0), position: Vec3::zeros() });
        let reference = Vec3::new(0.5, 0.4, 0.6);
        let p = Vec3::new(0.1, 0.08, 0.12);
        let psi = FnField(|q: &Vec3| Vec3::repeat(scalar_potential(&field, &reference, q, 400).unwrap()));
        let h = 1e-5;
        let grad = jacobian(&psi, &p, h).unwrap().row(0).transpose();
        let expected = field.field(&p).unwrap();
        assert!((-grad - expected).norm() <= 1e-4 * expected.norm());
    }

    #[test]
    fn potential_refuses_segments_through_sources() {
        let field = ModelField::PointDipole { moment: Vec3::z(), position: Vec3::zeros() };
        assert!(matches!(
            scalar_potential(&field, &Vec3::new(-1.0, 0.0, 0.0), &Vec3::x(), 10),
            Err(FieldError::Path { .. })
        ));
    }
}
