use std::f64::consts::TAU;

use super::SensorError;
use crate::error::UsageError;

/// First-order low-pass of a uniformly sampled series:
/// `y[n] = y[n−1] + α (x[n] − y[n−1])`, `α = 1 − exp(−2π δ dt)`, `y[0] = x[0]`.
///
/// An infinite `delta` passes the input through unchanged.
pub fn temporal_filter(series: &[f64], dt: f64, delta: f64) -> Result<Vec<f64>, SensorError> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(UsageError::new("sample interval must be positive").into());
    }
    if delta.is_nan() || delta <= 0.0 {
        return Err(UsageError::new("decoherence rate must be positive").into());
    }
    let alpha = if delta.is_infinite() { 1.0 } else { -(-TAU * delta * dt).exp_m1() };
    if alpha == 1.0 {
        return Ok(series.to_vec());
    }
    let mut out = Vec::with_capacity(series.len());
    let mut iter = series.iter();
    let Some(&first) = iter.next() else {
        return Ok(out);
    };
    let mut y = first;
    out.push(y);
    for &x in iter {
        y += alpha * (x - y);
        out.push(y);
    }
    Ok(out)
}
