//! Brownian and Néel relaxation of suspended magnetic particles, the
//! combined relaxation rate, and the frozen/active regime split.

use std::f64::consts::PI;

use super::SensorError;
use crate::constants::{BOLTZMANN, MAGNETITE_MS};
use crate::error::UsageError;

/// Largest Néel exponent `K·V/(kT)` evaluated before reporting overflow.
pub const MAX_NEEL_EXPONENT: f64 = 700.0;

/// Default Néel attempt time τ0, s.
pub const DEFAULT_TAU0: f64 = 1e-9;

/// Default effective anisotropy, J/m³. Small enough that a 10 nm magnetite
/// core relaxes in about a nanosecond.
pub const DEFAULT_ANISOTROPY: f64 = 1e3;

/// Mineral-oil carrier viscosity, Pa·s (2.4 cP).
pub const MINERAL_OIL_VISCOSITY: f64 = 2.4e-3;

/// Room temperature, K.
pub const ROOM_TEMPERATURE: f64 = 300.0;

/// Default observation time used for regime classification, s.
pub const DEFAULT_OBSERVATION_TIME: f64 = 60.0;

/// Physical parameters of one sensor particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleSpec {
    /// Core radius R, m.
    pub radius: f64,
    /// Surfactant coating thickness d, m.
    pub coating: f64,
    /// Carrier dynamic viscosity η, Pa·s.
    pub viscosity: f64,
    /// Temperature T, K.
    pub temperature: f64,
    /// Néel attempt time τ0, s.
    pub neel_tau0: f64,
    /// Effective anisotropy K, J/m³.
    pub anisotropy: f64,
    /// Particle moment m_p, A·m².
    pub particle_moment: f64,
}

impl ParticleSpec {
    /// Magnetite particle of core radius `radius` in mineral oil at 300 K,
    /// uncoated, with `m_p = M_s · (4/3)πR³`.
    pub fn magnetite(radius: f64) -> Self {
        ParticleSpec {
            radius,
            coating: 0.0,
            viscosity: MINERAL_OIL_VISCOSITY,
            temperature: ROOM_TEMPERATURE,
            neel_tau0: DEFAULT_TAU0,
            anisotropy: DEFAULT_ANISOTROPY,
            particle_moment: MAGNETITE_MS * core_volume(radius),
        }
    }

    /// The 10 nm diameter particle of a standard viewer film.
    pub fn ferrolens_default() -> Self {
        Self::magnetite(5e-9)
    }

    pub fn validate(&self) -> Result<(), UsageError> {
        let positive = [
            ("radius", self.radius),
            ("viscosity", self.viscosity),
            ("temperature", self.temperature),
            ("neel_tau0", self.neel_tau0),
            ("anisotropy", self.anisotropy),
            ("particle_moment", self.particle_moment),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(UsageError::new(format!("particle {name} must be positive, got {v}")));
            }
        }
        if !(self.coating.is_finite() && self.coating >= 0.0) {
            return Err(UsageError::new("particle coating must be >= 0"));
        }
        Ok(())
    }

    pub fn thermal_energy(&self) -> f64 {
        BOLTZMANN * self.temperature
    }
}

fn core_volume(radius: f64) -> f64 {
    4.0 / 3.0 * PI * radius.powi(3)
}

/// Hydrodynamic volume `V_B = (4/3)π(R + d)³`.
pub fn brownian_volume(spec: &ParticleSpec) -> f64 {
    core_volume(spec.radius + spec.coating)
}

/// `τ_B = 3 V_B η / (k T)`.
pub fn brownian_time(spec: &ParticleSpec) -> f64 {
    3.0 * brownian_volume(spec) * spec.viscosity / spec.thermal_energy()
}

/// `τ_N = τ0 · exp(K V_core / (k T))`.
pub fn neel_time(spec: &ParticleSpec) -> Result<f64, SensorError> {
    let exponent = spec.anisotropy * core_volume(spec.radius) / spec.thermal_energy();
    if !(exponent <= MAX_NEEL_EXPONENT) {
        return Err(SensorError::NeelOverflow { exponent });
    }
    Ok(spec.neel_tau0 * exponent.exp())
}

/// Parallel-rate combination `1/τ = 1/τ_B + 1/τ_N`. An infinite time drops
/// out exactly, and the result never exceeds the shorter time.
pub fn effective_time(tau_b: f64, tau_n: f64) -> f64 {
    if tau_b.is_infinite() {
        return tau_n;
    }
    if tau_n.is_infinite() {
        return tau_b;
    }
    (1.0 / (1.0 / tau_b + 1.0 / tau_n)).min(tau_b.min(tau_n))
}

/// `δ = 1/τ`.
pub fn decoherence_rate(tau: f64) -> f64 {
    1.0 / tau
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Relaxes faster than (or as fast as) the observation time.
    QuantumActive,
    /// Relaxation slower than the observation: the film behaves ferromagnetically.
    MacroscopicFrozen,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::QuantumActive => "quantum_active",
            Regime::MacroscopicFrozen => "macroscopic_frozen",
        }
    }
}

/// Frozen when `tau_eff > observation_time`; a tie counts as active.
pub fn classify_regime(tau_eff: f64, observation_time: f64) -> Regime {
    if tau_eff > observation_time {
        Regime::MacroscopicFrozen
    } else {
        Regime::QuantumActive
    }
}

/// Which relaxation channels take part in `tau_eff`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mechanisms {
    Brownian,
    Neel,
    Combined,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxationReport {
    pub v_b: f64,
    /// Infinite when the Brownian channel is excluded.
    pub tau_b: f64,
    /// Infinite when the Néel channel is excluded or blocked.
    pub tau_n: f64,
    pub tau_eff: f64,
    pub delta: f64,
    pub regime: Regime,
    pub observation_time: f64,
    /// The Néel exponent overflowed; the moment is magnetically blocked.
    pub neel_blocked: bool,
}

impl RelaxationReport {
    pub fn compute(spec: &ParticleSpec, mechanisms: Mechanisms, observation_time: f64) -> Result<Self, SensorError> {
        spec.validate()?;
        if !(observation_time.is_finite() && observation_time > 0.0) {
            return Err(UsageError::new("observation time must be positive").into());
        }
        let tau_b = match mechanisms {
            Mechanisms::Neel => f64::INFINITY,
            _ => brownian_time(spec),
        };
        let (tau_n, neel_blocked) = match mechanisms {
            Mechanisms::Brownian => (f64::INFINITY, false),
            _ => match neel_time(spec) {
                Ok(t) => (t, false),
                Err(SensorError::NeelOverflow { .. }) if mechanisms == Mechanisms::Combined => (f64::INFINITY, true),
                Err(e) => return Err(e),
            },
        };
        let tau_eff = effective_time(tau_b, tau_n);
        let delta = decoherence_rate(tau_eff);
        Ok(RelaxationReport {
            v_b: brownian_volume(spec),
            tau_b,
            tau_n,
            tau_eff,
            delta,
            regime: classify_regime(tau_eff, observation_time),
            observation_time,
            neel_blocked,
        })
    }
}
