use clap::{Args, ValueEnum};
use fluxforge_core::constants::N42_REMANENCE;
use fluxforge_core::format::{dipole_csv, fmt_f64, write_description};
use fluxforge_core::sources::presets::DEFAULT_RESOLUTION;
use fluxforge_core::sources::{
    build_grid_array, build_halbach_linear, build_ring_twister, build_single_cube, build_triangular_lattice,
    GridParams, GridPattern, HalbachParams, LatticeParams, MomentPattern, RingParams,
};
use fluxforge_core::Assembly;

use crate::common::{vec3_text, OutArgs};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Halbach,
    Ring,
    Lattice,
    Grid,
    Cube,
}

#[derive(Debug, Clone, Args)]
pub struct BuildArgs {
    #[arg(long, value_enum)]
    pub preset: Preset,
    /// Element count (halbach default 5, ring default 12).
    #[arg(long)]
    pub n: Option<usize>,
    /// Ring plate skew about the radial axis, degrees.
    #[arg(long = "skew-deg", default_value_t = 15.0)]
    pub skew_deg: f64,
    /// Lattice sphere count, 19 or 21.
    #[arg(long, default_value_t = 19)]
    pub count: usize,
    /// Moment pattern: all-up or alternating (lattice), checkerboard or all-up (grid).
    #[arg(long)]
    pub pattern: Option<String>,
    /// Grid rows and columns.
    #[arg(long, default_value_t = 4)]
    pub rows: usize,
    #[arg(long, default_value_t = 4)]
    pub cols: usize,
    /// Cube edge, millimetres.
    #[arg(long = "edge-mm", default_value_t = 10.0)]
    pub edge_mm: f64,
    #[arg(long = "remanence-T", default_value_t = N42_REMANENCE)]
    pub remanence: f64,
    /// Cells per axis of each magnet's dipole grid.
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    pub resolution: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

fn preset_name(p: Preset) -> &'static str {
    match p {
        Preset::Halbach => "halbach",
        Preset::Ring => "ring",
        Preset::Lattice => "lattice",
        Preset::Grid => "grid",
        Preset::Cube => "cube",
    }
}

fn no_pattern(a: &BuildArgs) -> CliResult {
    match &a.pattern {
        Some(p) => {
            Err(CliError::usage(format!("--pattern `{p}` does not apply to the {} preset", preset_name(a.preset))))
        }
        None => Ok(()),
    }
}

fn build(a: &BuildArgs) -> CliResult<Assembly> {
    Ok(match a.preset {
        Preset::Halbach => {
            no_pattern(a)?;
            build_halbach_linear(&HalbachParams {
                n: a.n.unwrap_or(5),
                remanence: a.remanence,
                resolution: a.resolution,
                ..Default::default()
            })?
        }
        Preset::Ring => {
            no_pattern(a)?;
            build_ring_twister(&RingParams {
                n: a.n.unwrap_or(12),
                skew: a.skew_deg.to_radians(),
                remanence: a.remanence,
                resolution: a.resolution,
                ..Default::default()
            })?
        }
        Preset::Lattice => {
            let pattern = match a.pattern.as_deref() {
                None | Some("all-up") => MomentPattern::AllUp,
                Some("alternating") => MomentPattern::AlternatingInPlane,
                Some(other) => return Err(CliError::usage(format!("unknown lattice pattern `{other}`"))),
            };
            build_triangular_lattice(&LatticeParams {
                count: a.count,
                pattern,
                remanence: a.remanence,
                resolution: a.resolution,
                ..Default::default()
            })?
        }
        Preset::Grid => {
            let pattern = match a.pattern.as_deref() {
                None | Some("checkerboard") => GridPattern::Checkerboard,
                Some("all-up") => GridPattern::AllUp,
                Some(other) => return Err(CliError::usage(format!("unknown grid pattern `{other}`"))),
            };
            build_grid_array(&GridParams {
                rows: a.rows,
                cols: a.cols,
                orientations: pattern.orientations(a.rows, a.cols),
                remanence: a.remanence,
                resolution: a.resolution,
                ..Default::default()
            })?
        }
        Preset::Cube => {
            no_pattern(a)?;
            build_single_cube(a.edge_mm * 1e-3, a.remanence, a.resolution)?
        }
    })
}

pub fn run_build(a: &BuildArgs) -> CliResult {
    let assembly = build(a)?;
    let out = a.out.open(preset_name(a.preset))?;
    out.write(".asm", write_description(&assembly).as_bytes())?;
    out.write("_dipoles.csv", dipole_csv(&assembly).as_bytes())?;
    let net = assembly.net_moment();
    println!("preset = {}", preset_name(a.preset));
    println!("magnets = {}", assembly.magnets().len());
    println!("dipoles = {}", assembly.dipoles().len());
    println!("total_moment_Am2 = {}", vec3_text(&net));
    println!("total_moment_norm_Am2 = {}", fmt_f64(net.norm()));
    Ok(())
}
