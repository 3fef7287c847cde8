//! File formats: number formatting, atomic writes, CSV/PGM exports and the
//! assembly description grammar.

mod description;
mod export;

pub use description::{
    parse_description, parse_ini, parse_model_spec, write_description, Description, IniSection, Section, Source,
};
pub use export::{
    dipole_csv, field_grid_csv, field_grid_pgm, field_grid_sidecar, fit_report, key_values, loglog_csv,
    relaxation_report, response_pgms, response_sidecar, spiral_plot_csv, streamline_csv, streamline_summary,
    write_atomic,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown key `{key}` in section [{section}]")]
    UnknownKey { line: usize, section: String, key: String },
    #[error("section [{section}] starting at line {line} is missing `{key}`")]
    MissingKey { line: usize, section: String, key: String },
    #[error("line {line}: invalid value for `{key}`: {message}")]
    Value { line: usize, key: String, message: String },
}

/// Nine significant digits in scientific notation, independent of locale.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.8e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(fmt_f64(1.0), "1.00000000e0");
        assert_eq!(fmt_f64(-1.716e-5), "-1.71600000e-5");
        assert_eq!(fmt_f64(f64::INFINITY), "inf");
        assert_eq!(fmt_f64(0.1 + 0.2), "3.00000000e-1");
    }
}
