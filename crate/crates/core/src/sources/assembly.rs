use std::ops::Range;

use rayon::prelude::*;

use super::{discretize_magnet, DipoleSource, PlacedMagnet, EXCLUSION_CELLS};
use crate::error::UsageError;
use crate::geometry::{Rotation, Vec3};

/// Ordered set of magnets together with their dipole discretization.
///
/// Dipoles of magnet `i` occupy the contiguous range `spans[i]` of the dipole
/// list, and each dipole carries an exclusion radius inside which field
/// evaluation is refused.
#[derive(Debug, Clone, PartialEq)]
pub struct Assembly {
    magnets: Vec<PlacedMagnet>,
    dipoles: Vec<DipoleSource>,
    exclusion: Vec<f64>,
    spans: Vec<Range<usize>>,
    resolution: Option<usize>,
}

impl Assembly {
    /// Discretizes every magnet at `resolution` cells per axis. Magnets are
    /// processed in parallel and concatenated in input order.
    pub fn discretize(magnets: Vec<PlacedMagnet>, resolution: usize) -> Result<Self, UsageError> {
        if magnets.is_empty() {
            return Err(UsageError::new("an assembly needs at least one magnet"));
        }
        if resolution == 0 {
            return Err(UsageError::new("resolution must be a positive integer"));
        }
        let parts: Vec<(Vec<DipoleSource>, f64)> = magnets
            .par_iter()
            .map(|m| {
                let d = discretize_magnet(&m.shape, &m.magnetization, &m.position, &m.rotation, resolution)?;
                Ok((d, EXCLUSION_CELLS * m.shape.cell_size(resolution)))
            })
            .collect::<Result<_, UsageError>>()?;

        let mut dipoles = Vec::new();
        let mut exclusion = Vec::new();
        let mut spans = Vec::with_capacity(parts.len());
        for (d, radius) in parts {
            let start = dipoles.len();
            exclusion.extend(std::iter::repeat_n(radius, d.len()));
            dipoles.extend(d);
            spans.push(start..dipoles.len());
        }
        Ok(Assembly { magnets, dipoles, exclusion, spans, resolution: Some(resolution) })
    }

    /// Assembly made of bare dipoles, each refusing evaluation closer than
    /// `exclusion_radius` (0 refuses only the source point itself).
    pub fn from_dipoles(dipoles: Vec<DipoleSource>, exclusion_radius: f64) -> Result<Self, UsageError> {
        if dipoles.is_empty() {
            return Err(UsageError::new("an assembly needs at least one dipole"));
        }
        if !exclusion_radius.is_finite() || exclusion_radius < 0.0 {
            return Err(UsageError::new("exclusion radius must be finite and >= 0"));
        }
        for d in &dipoles {
            DipoleSource::new(d.position, d.moment)?;
        }
        let exclusion = vec![exclusion_radius; dipoles.len()];
        Ok(Assembly { magnets: Vec::new(), dipoles, exclusion, spans: Vec::new(), resolution: None })
    }

    pub fn magnets(&self) -> &[PlacedMagnet] {
        &self.magnets
    }

    pub fn dipoles(&self) -> &[DipoleSource] {
        &self.dipoles
    }

    pub fn exclusion_radii(&self) -> &[f64] {
        &self.exclusion
    }

    /// Cells per axis, when the assembly came from a single discretization.
    pub fn resolution(&self) -> Option<usize> {
        self.resolution
    }

    /// Dipoles belonging to magnet `index`.
    pub fn magnet_dipoles(&self, index: usize) -> &[DipoleSource] {
        &self.dipoles[self.spans[index].clone()]
    }

    /// Dipoles that belong to no magnet, with their exclusion radii.
    pub fn bare_dipoles(&self) -> Vec<(DipoleSource, f64)> {
        let mut owned = vec![false; self.dipoles.len()];
        for s in &self.spans {
            owned[s.clone()].iter_mut().for_each(|o| *o = true);
        }
        self.dipoles.iter().zip(&self.exclusion).zip(owned).filter(|(_, o)| !o).map(|((d, r), _)| (*d, *r)).collect()
    }

    pub fn net_moment(&self) -> Vec3 {
        self.dipoles.iter().map(|d| d.moment).sum()
    }

    /// Bounding box of the magnets (or dipoles with their exclusion zones).
    pub fn bounds(&self) -> (Vec3, Vec3) {
        let mut lo = Vec3::repeat(f64::INFINITY);
        let mut hi = Vec3::repeat(f64::NEG_INFINITY);
        let mut grow = |c: &Vec3, r: f64| {
            lo = lo.inf(&c.add_scalar(-r));
            hi = hi.sup(&c.add_scalar(r));
        };
        for m in &self.magnets {
            grow(&m.position, m.shape.bounding_radius());
        }
        for (d, r) in self.dipoles.iter().zip(&self.exclusion) {
            grow(&d.position, *r);
        }
        (lo, hi)
    }

    /// Diagonal of [`Assembly::bounds`]; zero for a lone bare dipole.
    pub fn diameter(&self) -> f64 {
        let (lo, hi) = self.bounds();
        (hi - lo).norm()
    }

    pub fn center(&self) -> Vec3 {
        let (lo, hi) = self.bounds();
        (lo + hi) * 0.5
    }

    /// Concatenation of both assemblies, `self` first.
    pub fn union(&self, other: &Assembly) -> Assembly {
        let offset = self.dipoles.len();
        let mut spans = self.spans.clone();
        if self.magnets.len() == self.spans.len() && other.magnets.len() == other.spans.len() {
            spans.extend(other.spans.iter().map(|s| s.start + offset..s.end + offset));
        }
        Assembly {
            magnets: self.magnets.iter().chain(&other.magnets).copied().collect(),
            dipoles: self.dipoles.iter().chain(&other.dipoles).copied().collect(),
            exclusion: self.exclusion.iter().chain(&other.exclusion).copied().collect(),
            spans,
            resolution: if self.resolution == other.resolution { self.resolution } else { None },
        }
    }

    /// Rigid rotation of the whole assembly about the world origin. Magnet
    /// assemblies are re-discretized from their rotated poses.
    pub fn rotated(&self, r: &Rotation) -> Result<Assembly, UsageError> {
        match self.resolution {
            Some(res) if !self.magnets.is_empty() => {
                Assembly::discretize(self.magnets.iter().map(|m| m.rotated(r)).collect(), res)
            }
            _ => Ok(Assembly {
                dipoles: self
                    .dipoles
                    .iter()
                    .map(|d| DipoleSource { position: r.apply(&d.position), moment: r.apply(&d.moment) })
                    .collect(),
                ..self.clone()
            }),
        }
    }
}
