//! Physical constants (SI). Values are fixed; the Boltzmann constant uses the
//! three-digit value the relaxation estimates are quoted with.

use std::f64::consts::PI;

/// Vacuum permeability μ0, T·m/A.
pub const MU0: f64 = 4.0 * PI * 1e-7;

/// μ0 / 4π, the prefactor of the point-dipole field.
pub const MU0_OVER_4PI: f64 = 1e-7;

/// Vacuum permittivity ε0, F/m. Carried for completeness; every field in
/// this crate is magnetostatic so it never enters a computation.
pub const EPS0: f64 = 8.854_187_812_8e-12;

/// Boltzmann constant k, J/K.
pub const BOLTZMANN: f64 = 1.38e-23;

/// Default remanence for grade N42 NdFeB, T.
pub const N42_REMANENCE: f64 = 1.32;

/// Default remanence for sintered ferrite, T.
pub const FERRITE_REMANENCE: f64 = 0.35;

/// Saturation magnetization of magnetite, A/m.
pub const MAGNETITE_MS: f64 = 4.8e5;
