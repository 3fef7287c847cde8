use clap::{Args, ValueEnum};
use fluxforge_core::analysis::{
    conservativity_report, default_loops, fit_log_spiral, load_trace, radius_growth_check, search_origin,
    spiral_plot_rows, to_polar, Region, Tolerances, TraceUnit,
};
use fluxforge_core::field::default_fd_step;
use fluxforge_core::format::{fit_report, fmt_f64, key_values, loglog_csv, spiral_plot_csv};

use crate::common::{extent, parse_pair, OutArgs, SourceArgs};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum UnitArg {
    Pixel,
    Meter,
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    /// Trace CSV with an `x,y` header.
    #[arg(long, value_name = "FILE")]
    pub trace: std::path::PathBuf,
    #[arg(long, value_enum, default_value_t = UnitArg::Meter)]
    pub unit: UnitArg,
    /// Polar origin (the search starting point with --search-origin).
    #[arg(long, value_name = "X,Y", value_parser = parse_pair)]
    pub origin: Option<[f64; 2]>,
    /// Refine the origin by minimizing the fit residual on a shrinking grid.
    #[arg(long = "search-origin")]
    pub search_origin: bool,
    /// Half-width of the first search grid (default: a quarter of the trace extent).
    #[arg(long = "search-half-width")]
    pub search_half_width: Option<f64>,
    #[arg(long = "search-levels", default_value_t = 6)]
    pub search_levels: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

pub fn run_fit(a: &FitArgs) -> CliResult {
    let unit = match a.unit {
        UnitArg::Pixel => TraceUnit::Pixel,
        UnitArg::Meter => TraceUnit::Meter,
    };
    let trace = load_trace(&a.trace, unit)?;
    let origin = if a.search_origin {
        let pts = trace.points();
        let n = pts.len() as f64;
        let centroid = [pts.iter().map(|p| p[0]).sum::<f64>() / n, pts.iter().map(|p| p[1]).sum::<f64>() / n];
        let guess = a.origin.unwrap_or(centroid);
        let half_width = match a.search_half_width {
            Some(h) => h,
            None => {
                let span = |k: usize| {
                    let (lo, hi) =
                        pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), p| (l.min(p[k]), h.max(p[k])));
                    hi - lo
                };
                0.25 * span(0).max(span(1))
            }
        };
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(CliError::usage("--search-half-width must be positive"));
        }
        search_origin(&trace, guess, half_width, a.search_levels)?.0
    } else {
        a.origin.ok_or_else(|| CliError::usage("--origin is required unless --search-origin is given"))?
    };
    let polar = to_polar(&trace, origin)?;
    let fit = fit_log_spiral(&polar)?;
    let growth = radius_growth_check(&polar, &fit)?;
    let report = fit_report(&fit, &polar, growth, unit.name());

    let out = a.out.open("spiral_fit")?;
    out.write(".txt", report.as_bytes())?;
    out.write("_plot.csv", spiral_plot_csv(&spiral_plot_rows(&polar, &fit)).as_bytes())?;
    out.write("_loglog.csv", loglog_csv(&trace, origin).as_bytes())?;
    print!("{report}");
    Ok(())
}

#[derive(Debug, Clone, Args)]
pub struct ConserveArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Normalizing length scale, metres (default: the assembly diameter).
    #[arg(long, value_name = "M")]
    pub length: Option<f64>,
    /// Inner shell radius about the source center (default 3 lengths).
    #[arg(long, value_name = "M")]
    pub inner: Option<f64>,
    /// Outer shell radius (default 5 lengths).
    #[arg(long, value_name = "M")]
    pub outer: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Radius of the three test loops (default 4 lengths).
    #[arg(long = "loop-radius", value_name = "M")]
    pub loop_radius: Option<f64>,
    /// Skip the closed-loop work check.
    #[arg(long = "no-loops")]
    pub no_loops: bool,
    /// Finite-difference step, metres (default 1e-4 lengths).
    #[arg(long = "fd-step", value_name = "M")]
    pub fd_step: Option<f64>,
    #[arg(long = "tol-div", default_value_t = 1e-6)]
    pub tol_div: f64,
    #[arg(long = "tol-curl", default_value_t = 1e-6)]
    pub tol_curl: f64,
    #[arg(long = "tol-work", default_value_t = 1e-12)]
    pub tol_work: f64,
    #[arg(long = "tol-curl-force", default_value_t = 1e-4)]
    pub tol_curl_force: f64,
    #[arg(long = "tol-potential", default_value_t = 1e-4)]
    pub tol_potential: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

pub fn run_conserve(a: &ConserveArgs) -> CliResult {
    let source = a.source.require()?;
    let bounds = extent(&source);
    let center = bounds.as_ref().map(|b| b.0).unwrap_or_default();
    let length = match (a.length, &bounds) {
        (Some(l), _) => l,
        (None, Some((_, _, d))) if *d > 0.0 => *d,
        _ => return Err(CliError::usage("--length is required for this source")),
    };
    let region = Region {
        center,
        inner_radius: a.inner.unwrap_or(3.0 * length),
        outer_radius: a.outer.unwrap_or(5.0 * length),
        samples: a.samples,
    };
    let loops = if a.no_loops { Vec::new() } else { default_loops(center, a.loop_radius.unwrap_or(4.0 * length))? };
    let tolerances = Tolerances {
        divergence: a.tol_div,
        curl: a.tol_curl,
        work: a.tol_work,
        curl_force: a.tol_curl_force,
        potential: a.tol_potential,
    };
    let h = a.fd_step.unwrap_or_else(|| default_fd_step(length));
    let report = conservativity_report(&source, &region, &loops, length, h, &tolerances)?;

    let mut pairs = vec![
        ("length_m", fmt_f64(length)),
        ("fd_step_m", fmt_f64(h)),
        ("samples", region.samples.to_string()),
        ("inner_radius_m", fmt_f64(region.inner_radius)),
        ("outer_radius_m", fmt_f64(region.outer_radius)),
        ("max_abs_div", fmt_f64(report.max_abs_div)),
        ("max_abs_curl_H", fmt_f64(report.max_abs_curl_h)),
        ("closed_loop_work", report.closed_loop_work.map(fmt_f64).unwrap_or_else(|| "not_run".into())),
        ("loop_segments", report.loop_segments.to_string()),
        ("curl_force_residual", fmt_f64(report.curl_force_residual)),
        ("potential_residual", fmt_f64(report.potential_residual)),
    ];
    let check_keys: Vec<String> = report.checks.iter().map(|c| format!("{}_check", c.name)).collect();
    for (c, key) in report.checks.iter().zip(&check_keys) {
        let verdict = match c.passed {
            Some(true) => "passed",
            Some(false) => "failed",
            None => "not_run",
        };
        pairs.push((key, verdict.to_string()));
    }
    pairs.push(("verdict", if report.passed() { "passed" } else { "failed" }.to_string()));
    let mut text = key_values(&pairs);
    for n in &report.notes {
        text.push_str(&format!("# {n}\n"));
    }

    let out = a.out.open("conservativity")?;
    out.write(".txt", text.as_bytes())?;
    print!("{text}");
    if report.passed() {
        Ok(())
    } else {
        let failed: Vec<&str> = report.checks.iter().filter(|c| c.passed == Some(false)).map(|c| c.name).collect();
        Err(CliError::numeric(format!("conservativity checks failed: {}", failed.join(", "))))
    }
}
