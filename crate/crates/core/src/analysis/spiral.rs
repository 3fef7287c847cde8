//! Logarithmic-spiral regression `r = a·e^{bθ}` by ordinary least squares
//! of `ln r` on `θ`.

use super::trace::{to_polar, PolarTrace, Trace};
use super::AnalysisError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpiralFit {
    /// Scale `a`, in trace units.
    pub a: f64,
    /// Pitch `b`; its sign follows the unwrapped winding sense.
    pub b: f64,
    pub r_squared: f64,
    /// RMS residual of `ln r`.
    pub rms_residual: f64,
    pub n_points: usize,
}

pub fn fit_log_spiral(polar: &PolarTrace) -> Result<SpiralFit, AnalysisError> {
    let n = polar.len();
    if n < 2 || polar.r.iter().any(|r| !(*r > 0.0)) {
        return Err(AnalysisError::DegenerateFit);
    }
    let nf = n as f64;
    let ln_r: Vec<f64> = polar.r.iter().map(|r| r.ln()).collect();
    let t_mean = polar.theta.iter().sum::<f64>() / nf;
    let y_mean = ln_r.iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (t, y) in polar.theta.iter().zip(&ln_r) {
        let (dt, dy) = (t - t_mean, y - y_mean);
        sxx += dt * dt;
        sxy += dt * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(AnalysisError::DegenerateFit);
    }
    let b = sxy / sxx;
    let intercept = y_mean - b * t_mean;
    let ss_res: f64 = polar
        .theta
        .iter()
        .zip(&ln_r)
        .map(|(t, y)| {
            let e = y - (intercept + b * t);
            e * e
        })
        .sum();
    let r_squared = if syy == 0.0 { 1.0 } else { (1.0 - ss_res / syy).clamp(0.0, 1.0) };
    Ok(SpiralFit { a: intercept.exp(), b, r_squared, rms_residual: (ss_res / nf).sqrt(), n_points: n })
}

/// Largest relative mismatch between the central-difference `dr/dθ` and
/// `b·r` over interior samples. For a zero pitch the mismatch is measured
/// against `r` instead.
pub fn radius_growth_check(polar: &PolarTrace, fit: &SpiralFit) -> Result<f64, AnalysisError> {
    if polar.len() < 3 {
        return Err(AnalysisError::InsufficientData { got: polar.len(), needed: 3 });
    }
    let (t, r) = (&polar.theta, &polar.r);
    let worst = (1..polar.len() - 1)
        .map(|i| {
            let slope = (r[i + 1] - r[i - 1]) / (t[i + 1] - t[i - 1]);
            if fit.b.abs() <= 1e-12 {
                slope.abs() / r[i]
            } else {
                (slope - fit.b * r[i]).abs() / (fit.b * r[i]).abs()
            }
        })
        .fold(0.0, f64::max);
    Ok(worst)
}

/// Coarse-to-fine grid search for the polar origin minimizing the fit RMS.
///
/// A 9×9 candidate grid of half-width `half_width` is centered on the best
/// origin so far, then shrunk fourfold for each of `levels` passes. Candidates
/// that fail to convert (reversing winding, point at origin) are skipped.
/// This is a heuristic: it finds a local minimum near `guess`.
pub fn search_origin(
    trace: &Trace,
    guess: [f64; 2],
    half_width: f64,
    levels: usize,
) -> Result<([f64; 2], SpiralFit), AnalysisError> {
    let evaluate = |o: [f64; 2]| to_polar(trace, o).and_then(|p| fit_log_spiral(&p)).ok();
    let mut best = (guess, evaluate(guess));
    let mut hw = half_width;
    for _ in 0..levels {
        let center = best.0;
        for i in -4i32..=4 {
            for j in -4i32..=4 {
                let o = [center[0] + hw * f64::from(i) / 4.0, center[1] + hw * f64::from(j) / 4.0];
                if let Some(fit) = evaluate(o) {
                    if best.1.is_none_or(|b| fit.rms_residual < b.rms_residual) {
                        best = (o, Some(fit));
                    }
                }
            }
        }
        hw /= 4.0;
    }
    match best {
        (o, Some(fit)) => Ok((o, fit)),
        _ => Err(AnalysisError::DegenerateFit),
    }
}

/// Plot rows `(theta, r, ln r, fitted ln r)`.
pub fn spiral_plot_rows(polar: &PolarTrace, fit: &SpiralFit) -> Vec<[f64; 4]> {
    let ln_a = fit.a.ln();
    polar.theta.iter().zip(&polar.r).map(|(&t, &r)| [t, r, r.ln(), ln_a + fit.b * t]).collect()
}
