//! Magnetostatics toolkit: dipole-superposition fields of permanent-magnet
//! assemblies, field-line tracing, superparamagnetic sensor-film response,
//! logarithmic-spiral fitting and numerical conservativity checks.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod constants;
pub mod error;
pub mod field;
pub mod format;
pub mod geometry;
pub mod sensor;
pub mod sources;
pub mod streamline;

pub use error::{Error, ErrorKind, GeometryError, Result, UsageError};
pub use field::{b_dipole, b_total, FieldError, FieldGrid, ModelField, VectorField};
pub use geometry::{Aabb, Rotation, Vec3};
pub use sources::{Assembly, DipoleSource, MagnetShape, PlacedMagnet, UniformMagnetization};
pub use streamline::{IntegratorConfig, Streamline, Termination};
