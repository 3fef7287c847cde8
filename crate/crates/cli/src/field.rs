use clap::Args;
use fluxforge_core::field::{surface_map, GridSpec, Quantity};
use fluxforge_core::format::{field_grid_csv, field_grid_pgm, field_grid_sidecar, fmt_f64};
use fluxforge_core::{Vec3, VectorField};

use crate::common::{extent, parse_vec3, OutArgs, SourceArgs};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Sample point in metres, x,y,z; repeatable.
    #[arg(long, value_name = "X,Y,Z", value_parser = parse_vec3, required = true, action = clap::ArgAction::Append)]
    pub at: Vec<Vec3>,
}

pub fn run_sample(a: &SampleArgs) -> CliResult {
    let source = a.source.require()?;
    println!("x_m,y_m,z_m,bx_T,by_T,bz_T");
    for p in &a.at {
        let b = source.field(p)?;
        let cells: Vec<String> = p.iter().chain(b.iter()).map(|v| fmt_f64(*v)).collect();
        println!("{}", cells.join(","));
    }
    Ok(())
}

#[derive(Debug, Clone, Args)]
pub struct MapArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Plane as axis=offset in metres: z=0.01, y=0 or x=0.
    #[arg(long, value_name = "AXIS=M")]
    pub plane: String,
    #[arg(long, default_value_t = 64)]
    pub nx: usize,
    #[arg(long, default_value_t = 64)]
    pub ny: usize,
    /// Half-width of the square map, metres (default: 1.5 times the in-plane assembly half-extent).
    #[arg(long = "half-width", value_name = "M")]
    pub half_width: Option<f64>,
    /// In-plane map center (default: the assembly center).
    #[arg(long, value_name = "U,V", value_parser = crate::common::parse_pair)]
    pub center: Option<[f64; 2]>,
    /// magnitude, bz or in-plane-angle.
    #[arg(long, default_value = "magnitude")]
    pub quantity: String,
    #[command(flatten)]
    pub out: OutArgs,
}

/// Normal axis index and the two in-plane axis indices of `x=`, `y=` or `z=`.
fn parse_plane(s: &str) -> CliResult<(usize, [usize; 2], f64)> {
    let (axis, value) =
        s.split_once('=').ok_or_else(|| CliError::usage(format!("--plane expects axis=offset, got `{s}`")))?;
    let (normal, inplane) = match axis.trim() {
        "x" => (0, [1, 2]),
        "y" => (1, [0, 2]),
        "z" => (2, [0, 1]),
        other => return Err(CliError::usage(format!("unknown plane axis `{other}`"))),
    };
    let offset: f64 = value
        .trim()
        .parse()
        .ok()
        .filter(|v: &f64| v.is_finite())
        .ok_or_else(|| CliError::usage(format!("plane offset `{value}` is not a finite number")))?;
    Ok((normal, inplane, offset))
}

pub fn run_map(a: &MapArgs) -> CliResult {
    let source = a.source.require()?;
    let quantity = Quantity::parse(&a.quantity)?;
    let (normal, [iu, iv], offset) = parse_plane(&a.plane)?;
    if a.nx < 3 || a.ny < 3 {
        return Err(CliError::usage("--nx and --ny must be at least 3"));
    }
    let bounds = extent(&source);
    let half_width = match (a.half_width, &bounds) {
        (Some(h), _) => h,
        (None, Some((_, half, _))) => 1.5 * half[iu].max(half[iv]),
        (None, None) => return Err(CliError::usage("--half-width is required for model sources")),
    };
    if !(half_width.is_finite() && half_width > 0.0) {
        return Err(CliError::usage("--half-width must be positive"));
    }
    let mut center = bounds.map(|(c, _, _)| c).unwrap_or_else(Vec3::zeros);
    if let Some([u, v]) = a.center {
        center[iu] = u;
        center[iv] = v;
    }
    center[normal] = offset;
    let unit = |i: usize| {
        let mut e = Vec3::zeros();
        e[i] = 1.0;
        e
    };
    let (u, v) = (unit(iu), unit(iv));
    let spacing = 2.0 * half_width / (a.nx.max(a.ny) - 1) as f64;
    let spec = GridSpec::plane(center, u, v, a.nx, a.ny, spacing)?;
    let grid = surface_map(&source, &spec, quantity)?;

    let out = a.out.open("field_map")?;
    out.write(".csv", field_grid_csv(&grid).as_bytes())?;
    out.write(".pgm", &field_grid_pgm(&grid)?)?;
    out.write(".txt", field_grid_sidecar(&grid).as_bytes())?;
    let (lo, hi) = grid.min_max();
    println!("quantity = {}", quantity.name());
    println!("nodes = {}", grid.values.len());
    println!("min = {}", fmt_f64(lo));
    println!("max = {}", fmt_f64(hi));
    println!("local_maxima = {}", grid.local_maxima().len());
    Ok(())
}
