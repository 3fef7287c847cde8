use std::f64::consts::TAU;

use rayon::prelude::*;

use super::{FieldError, VectorField};
use crate::error::UsageError;
use crate::geometry::{is_finite, Vec3};

/// Regular grid of sample nodes: `origin + Σ idx[a] · spacing · axes[a]`.
/// Node order is row-major with axis 0 fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub origin: Vec3,
    pub axes: Vec<Vec3>,
    pub counts: Vec<usize>,
    pub spacing: f64,
}

impl GridSpec {
    pub fn new(origin: Vec3, axes: Vec<Vec3>, counts: Vec<usize>, spacing: f64) -> Result<Self, UsageError> {
        if !(2..=3).contains(&axes.len()) || axes.len() != counts.len() {
            return Err(UsageError::new("a grid needs two or three axes with one count each"));
        }
        if counts.iter().any(|&c| c < 2) {
            return Err(UsageError::new("every grid axis needs at least 2 nodes"));
        }
        if !(spacing.is_finite() && spacing > 0.0) || !is_finite(&origin) {
            return Err(UsageError::new("grid spacing must be positive and the origin finite"));
        }
        for (i, a) in axes.iter().enumerate() {
            if !is_finite(a) || (a.norm() - 1.0).abs() > 1e-12 {
                return Err(UsageError::new("grid axes must be unit vectors"));
            }
            if axes[..i].iter().any(|b| a.dot(b).abs() > 1e-12) {
                return Err(UsageError::new("grid axes must be mutually orthogonal"));
            }
        }
        Ok(GridSpec { origin, axes, counts, spacing })
    }

    /// Plane grid spanned by `u` and `v`, centered on `center`.
    pub fn plane(center: Vec3, u: Vec3, v: Vec3, nx: usize, ny: usize, spacing: f64) -> Result<Self, UsageError> {
        let origin =
            center - u * (spacing * (nx.max(1) - 1) as f64 / 2.0) - v * (spacing * (ny.max(1) - 1) as f64 / 2.0);
        Self::new(origin, vec![u, v], vec![nx, ny], spacing)
    }

    /// Plane `z = height` covering `[-half_width, half_width]²` about `(cx, cy)`.
    /// Pixels are square; the spacing follows the larger count.
    pub fn horizontal(
        cx: f64,
        cy: f64,
        height: f64,
        half_width: f64,
        nx: usize,
        ny: usize,
    ) -> Result<Self, UsageError> {
        let n = nx.max(ny).max(2);
        let spacing = 2.0 * half_width / (n - 1) as f64;
        Self::plane(Vec3::new(cx, cy, height), Vec3::x(), Vec3::y(), nx, ny, spacing)
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Per-axis index of flat node `n`.
    pub fn index(&self, mut n: usize) -> Vec<usize> {
        self.counts
            .iter()
            .map(|&c| {
                let i = n % c;
                n /= c;
                i
            })
            .collect()
    }

    pub fn node(&self, idx: &[usize]) -> Vec3 {
        idx.iter().zip(&self.axes).fold(self.origin, |acc, (&i, a)| acc + a * (i as f64 * self.spacing))
    }

    pub fn normal(&self) -> Vec3 {
        self.axes[0].cross(&self.axes[1])
    }
}

/// Scalar reduced from B at each node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    /// `|B|`.
    Magnitude,
    /// World z component of B.
    Bz,
    /// Angle of B projected on the first two grid axes, in `[0, 2π)`.
    InPlaneAngle,
}

impl Quantity {
    pub fn name(&self) -> &'static str {
        match self {
            Quantity::Magnitude => "magnitude",
            Quantity::Bz => "bz",
            Quantity::InPlaneAngle => "in-plane-angle",
        }
    }

    pub fn parse(s: &str) -> Result<Self, UsageError> {
        match s {
            "magnitude" => Ok(Quantity::Magnitude),
            "bz" => Ok(Quantity::Bz),
            "in-plane-angle" | "angle" => Ok(Quantity::InPlaneAngle),
            other => Err(UsageError::new(format!("unknown quantity `{other}`"))),
        }
    }

    fn reduce(&self, b: &Vec3, u: &Vec3, v: &Vec3) -> f64 {
        match self {
            Quantity::Magnitude => b.norm(),
            Quantity::Bz => b.z,
            Quantity::InPlaneAngle => in_plane_angle(b, u, v),
        }
    }
}

/// Angle of `b` in the `(u, v)` frame, wrapped to `[0, 2π)`.
pub fn in_plane_angle(b: &Vec3, u: &Vec3, v: &Vec3) -> f64 {
    let a = b.dot(v).atan2(b.dot(u));
    let a = if a < 0.0 { a + TAU } else { a };
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// Sampled scalar field.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    pub spec: GridSpec,
    pub quantity: Quantity,
    pub values: Vec<f64>,
}

impl FieldGrid {
    pub fn value(&self, idx: &[usize]) -> f64 {
        let mut flat = 0;
        let mut stride = 1;
        for (i, c) in idx.iter().zip(&self.spec.counts) {
            flat += i * stride;
            stride *= c;
        }
        self.values[flat]
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }

    /// Interior nodes of a 2-axis grid strictly greater than all 8 neighbours.
    pub fn local_maxima(&self) -> Vec<(usize, usize)> {
        if self.spec.counts.len() != 2 {
            return Vec::new();
        }
        let (nx, ny) = (self.spec.counts[0], self.spec.counts[1]);
        let mut out = Vec::new();
        for j in 1..ny.saturating_sub(1) {
            for i in 1..nx.saturating_sub(1) {
                let v = self.value(&[i, j]);
                let is_max = (-1i64..=1)
                    .flat_map(|dj| (-1i64..=1).map(move |di| (di, dj)))
                    .filter(|&d| d != (0, 0))
                    .all(|(di, dj)| v > self.value(&[(i as i64 + di) as usize, (j as i64 + dj) as usize]));
                if is_max {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// Samples `quantity` of `source` at every grid node. Nodes are evaluated in
/// parallel; each node's value depends only on its position, so the result
/// is identical for any thread count.
pub fn surface_map<F: VectorField + ?Sized>(
    source: &F,
    spec: &GridSpec,
    quantity: Quantity,
) -> Result<FieldGrid, FieldError> {
    let (u, v) = (spec.axes[0], spec.axes[1]);
    let results: Vec<Result<f64, FieldError>> = (0..spec.len())
        .into_par_iter()
        .map(|n| {
            let p = spec.node(&spec.index(n));
            source.field(&p).map(|b| quantity.reduce(&b, &u, &v))
        })
        .collect();

    let mut values = Vec::with_capacity(results.len());
    let mut excluded = Vec::new();
    for (n, r) in results.into_iter().enumerate() {
        match r {
            Ok(x) => values.push(x),
            Err(e) if e.is_singular() => excluded.push(spec.index(n)),
            Err(e) => return Err(e),
        }
    }
    if !excluded.is_empty() {
        return Err(FieldError::NodesInExclusion { nodes: excluded });
    }
    Ok(FieldGrid { spec: spec.clone(), quantity, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ModelField;
    use crate::sources::{Assembly, DipoleSource};

    #[test]
    fn rejects_bad_specs() {
        assert!(GridSpec::new(Vec3::zeros(), vec![Vec3::x()], vec![4], 1.0).is_err());
        assert!(GridSpec::new(Vec3::zeros(), vec![Vec3::x(), Vec3::x()], vec![4, 4], 1.0).is_err());
        assert!(GridSpec::new(Vec3::zeros(), vec![Vec3::x(), Vec3::y()], vec![1, 4], 1.0).is_err());
        assert!(GridSpec::new(Vec3::zeros(), vec![Vec3::x(), Vec3::y()], vec![4, 4], 0.0).is_err());
    }

    #[test]
    fn row_major_indexing() {
        let g = GridSpec::new(Vec3::zeros(), vec![Vec3::x(), Vec3::y()], vec![3, 2], 0.5).unwrap();
        assert_eq!(g.index(4), vec![1, 1]);
        assert_eq!(g.node(&[2, 1]), Vec3::new(1.0, 0.5, 0.0));
    }

    #[test]
    fn dipole_peak_at_center_node() {
        let src = ModelField::PointDipole { moment: Vec3::z(), position: Vec3::zeros() };
        let g = GridSpec::horizontal(0.0, 0.0, 0.01, 0.02, 21, 21).unwrap();
        let map = surface_map(&src, &g, Quantity::Magnitude).unwrap();
        let (imax, _) =
            map.values.iter().enumerate().fold((0, f64::MIN), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        assert_eq!(g.index(imax), vec![10, 10]);
        assert_eq!(map.local_maxima(), vec![(10, 10)]);
    }

    #[test]
    fn uniform_map_is_constant() {
        let src = ModelField::Uniform { b: Vec3::new(0.1, 0.2, 0.3) };
        let g = GridSpec::horizontal(0.0, 0.0, 0.0, 1.0, 8, 8).unwrap();
        let map = surface_map(&src, &g, Quantity::Magnitude).unwrap();
        assert!(map.values.iter().all(|v| *v == map.values[0]));
    }

    #[test]
    fn nodes_in_exclusion_are_listed() {
        let a = Assembly::from_dipoles(vec![DipoleSource::new(Vec3::zeros(), Vec3::z()).unwrap()], 0.15).unwrap();
        let g = GridSpec::horizontal(0.0, 0.0, 0.0, 1.0, 11, 11).unwrap();
        match surface_map(&a, &g, Quantity::Bz) {
            Err(FieldError::NodesInExclusion { nodes }) => assert_eq!(nodes, vec![vec![5, 5]]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn angle_wraps_into_range() {
        let a = in_plane_angle(&Vec3::new(1.0, -1e-300, 0.0), &Vec3::x(), &Vec3::y());
        assert!((0.0..TAU).contains(&a));
    }
}
