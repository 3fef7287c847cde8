//! Digitized-trace analysis and conservativity checks.

mod conservativity;
mod spiral;
mod trace;
mod work;

pub use conservativity::{
    conservativity_report, default_loops, CheckOutcome, ConservativityReport, Region, Tolerances,
};
pub use spiral::{fit_log_spiral, radius_growth_check, search_origin, spiral_plot_rows, SpiralFit};
pub use trace::{load_trace, parse_trace, to_polar, PolarTrace, Trace, TraceUnit, MIN_TRACE_POINTS};
pub use work::{curl_force_check, work_integral, ForceField, LoopPath, WorkEstimate, MIN_LOOP_SEGMENTS};

use thiserror::Error;

use crate::error::UsageError;
use crate::field::FieldError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("insufficient data: {got} point(s), at least {needed} required")]
    InsufficientData { got: usize, needed: usize },
    #[error("not a single arm: winding reverses at {reversals} sample(s)")]
    NotSingleArm { reversals: usize },
    #[error("trace point {index} coincides with the polar origin")]
    AtOrigin { index: usize },
    #[error("degenerate fit: theta has zero variance")]
    DegenerateFit,
    #[error("cannot read trace: {0}")]
    Io(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("usage error: {0}")]
    Usage(#[from] UsageError),
}

impl AnalysisError {
    /// Malformed input as opposed to a numeric/domain failure.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            AnalysisError::Parse { .. }
                | AnalysisError::InsufficientData { .. }
                | AnalysisError::Io(_)
                | AnalysisError::Usage(_)
                | AnalysisError::Field(FieldError::Usage(_))
        )
    }
}
