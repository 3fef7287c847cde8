use clap::{Args, ValueEnum};
use fluxforge_core::format::{fmt_f64, relaxation_report, response_pgms, response_sidecar};
use fluxforge_core::sensor::{
    render_response, temporal_filter, Mechanisms, RelaxationReport, SensorSpec, DEFAULT_OBSERVATION_TIME,
};
use fluxforge_core::{Rotation, Vec3};

use crate::common::{parse_vec3, OutArgs, ParticleArgs, SourceArgs};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MechanismArg {
    Brownian,
    Neel,
    Combined,
}

#[derive(Debug, Clone, Args)]
pub struct MechanismArgs {
    /// Include Néel relaxation (shorthand for --mechanism combined).
    #[arg(long, conflicts_with = "mechanism")]
    pub neel: bool,
    /// Relaxation channels (default brownian).
    #[arg(long, value_enum)]
    pub mechanism: Option<MechanismArg>,
}

impl MechanismArgs {
    fn resolve(&self) -> (Mechanisms, &'static str) {
        match (self.neel, self.mechanism) {
            (true, _) | (_, Some(MechanismArg::Combined)) => (Mechanisms::Combined, "combined"),
            (_, Some(MechanismArg::Neel)) => (Mechanisms::Neel, "neel"),
            _ => (Mechanisms::Brownian, "brownian"),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RelaxArgs {
    #[command(flatten)]
    pub particle: ParticleArgs,
    #[command(flatten)]
    pub mechanisms: MechanismArgs,
    /// Observation time for regime classification, seconds.
    #[arg(long = "t-obs", value_name = "S", default_value_t = DEFAULT_OBSERVATION_TIME)]
    pub t_obs: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

fn relax(particle: &ParticleArgs, mechanisms: &MechanismArgs, t_obs: f64) -> CliResult<(RelaxationReport, String)> {
    let spec = particle.spec()?;
    let (mech, name) = mechanisms.resolve();
    let report = RelaxationReport::compute(&spec, mech, t_obs)?;
    Ok((report, relaxation_report(&report, &spec, name)))
}

pub fn run_relax(a: &RelaxArgs) -> CliResult {
    let (_, text) = relax(&a.particle, &a.mechanisms, a.t_obs)?;
    let out = a.out.open("relaxation")?;
    out.write(".txt", text.as_bytes())?;
    print!("{text}");
    Ok(())
}

#[derive(Debug, Clone, Args)]
pub struct RenderArgs {
    /// Field source; without one the film sees no field.
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub particle: ParticleArgs,
    /// Film center, metres.
    #[arg(long, value_name = "X,Y,Z", value_parser = parse_vec3, default_value = "0,0,0.01")]
    pub center: Vec3,
    /// Film orientation as x,y,z rotation angles in degrees.
    #[arg(long = "rot-deg", value_name = "A,B,C", value_parser = parse_vec3, default_value = "0,0,0")]
    pub rot_deg: Vec3,
    #[arg(long, default_value_t = 64)]
    pub nx: usize,
    #[arg(long, default_value_t = 64)]
    pub ny: usize,
    /// Pixel pitch, metres.
    #[arg(long, value_name = "M", default_value_t = 1e-3)]
    pub pitch: f64,
    /// Pixels with |B| below this stay idle, millitesla.
    #[arg(long = "threshold-mT", value_name = "MT", default_value_t = 15.0)]
    pub threshold_mt: f64,
    /// Particle volume fraction of the film.
    #[arg(long, default_value_t = 0.0075)]
    pub concentration: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

pub fn run_render(a: &RenderArgs) -> CliResult {
    let source = a.source.or_zero()?;
    let particle = a.particle.spec()?;
    let mut sensor = SensorSpec::new(a.center, a.nx, a.ny, a.pitch);
    sensor.orientation = Rotation::from_xyz_deg([a.rot_deg.x, a.rot_deg.y, a.rot_deg.z])?;
    sensor.b_min = a.threshold_mt * 1e-3;
    sensor.concentration = a.concentration;
    let img = render_response(&source, &sensor, &particle)?;
    let (angle, magnitude) = response_pgms(&img);
    let out = a.out.open("response")?;
    out.write("_angle.pgm", &angle)?;
    out.write("_magnitude.pgm", &magnitude)?;
    out.write(".txt", response_sidecar(&img, &sensor, &particle).as_bytes())?;
    println!("pixels = {}", img.nx * img.ny);
    println!("mask_count = {}", img.mask_count());
    Ok(())
}

#[derive(Debug, Clone, Args)]
pub struct FilterArgs {
    /// CSV with a `value` column (header `value` or `t,value`).
    #[arg(long, value_name = "FILE")]
    pub input: std::path::PathBuf,
    /// Sample interval, seconds.
    #[arg(long, value_name = "S")]
    pub dt: f64,
    /// Cut-off rate in hertz (default: the decoherence rate of the particle).
    #[arg(long, value_name = "HZ")]
    pub delta: Option<f64>,
    #[command(flatten)]
    pub particle: ParticleArgs,
    #[command(flatten)]
    pub mechanisms: MechanismArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

fn read_series(path: &std::path::Path) -> CliResult<Vec<f64>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read series {}: {e}", path.display())))?;
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| CliError::usage("series file is empty"))?;
    let columns: Vec<&str> = header.split(',').map(str::trim).collect();
    let col = match columns[..] {
        ["value"] => 0,
        ["t", "value"] => 1,
        _ => return Err(CliError::usage(format!("series header must be `value` or `t,value`, got `{header}`"))),
    };
    lines
        .map(|(i, l)| {
            let cells: Vec<&str> = l.split(',').map(str::trim).collect();
            if cells.len() != columns.len() {
                return Err(CliError::usage(format!("line {}: expected {} column(s)", i + 1, columns.len())));
            }
            cells[col]
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::usage(format!("line {}: `{}` is not a finite number", i + 1, cells[col])))
        })
        .collect()
}

pub fn run_filter(a: &FilterArgs) -> CliResult {
    let series = read_series(&a.input)?;
    let delta = match a.delta {
        Some(d) => d,
        None => relax(&a.particle, &a.mechanisms, DEFAULT_OBSERVATION_TIME)?.0.delta,
    };
    let filtered = temporal_filter(&series, a.dt, delta)?;
    let mut s = String::from("index,input,output\n");
    for (i, (x, y)) in series.iter().zip(&filtered).enumerate() {
        s.push_str(&format!("{i},{},{}\n", fmt_f64(*x), fmt_f64(*y)));
    }
    let out = a.out.open("filtered")?;
    out.write(".csv", s.as_bytes())?;
    println!("samples = {}", series.len());
    println!("delta_Hz = {}", fmt_f64(delta));
    Ok(())
}
