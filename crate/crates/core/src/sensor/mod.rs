//! Viewer-film model: superparamagnetic particle relaxation, Langevin
//! alignment, sensor-plane response images and the first-order temporal
//! low-pass that hides fluctuations faster than the relaxation rate.

mod filter;
mod relaxation;
mod render;

pub use filter::temporal_filter;
pub use relaxation::{
    brownian_time, brownian_volume, classify_regime, decoherence_rate, effective_time, neel_time, Mechanisms,
    ParticleSpec, Regime, RelaxationReport, DEFAULT_ANISOTROPY, DEFAULT_OBSERVATION_TIME, DEFAULT_TAU0,
    MAX_NEEL_EXPONENT, MINERAL_OIL_VISCOSITY, ROOM_TEMPERATURE,
};
pub use render::{alignment, langevin, render_response, ResponseImage, SensorSpec};

use thiserror::Error;

use crate::error::UsageError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SensorError {
    #[error("Néel exponent K·V/kT = {exponent:.3e} exceeds 700: the particle is magnetically blocked")]
    NeelOverflow { exponent: f64 },
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("usage error: {0}")]
    Usage(#[from] UsageError),
}
