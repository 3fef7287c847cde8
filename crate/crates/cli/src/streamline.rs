use clap::{Args, ValueEnum};
use fluxforge_core::format::{fmt_f64, streamline_csv, streamline_summary};
use fluxforge_core::streamline::{seed_ring, trace_set, Direction};
use fluxforge_core::{Aabb, IntegratorConfig, Vec3};

use crate::common::{extent, parse_vec3, OutArgs, SourceArgs};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Forward,
    Backward,
    Both,
}

#[derive(Debug, Clone, Args)]
pub struct TraceArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Seed point in metres, x,y,z; repeatable.
    #[arg(long, value_name = "X,Y,Z", value_parser = parse_vec3, action = clap::ArgAction::Append)]
    pub seed: Vec<Vec3>,
    /// Center of a ring of seeds.
    #[arg(long = "ring-center", value_name = "X,Y,Z", value_parser = parse_vec3)]
    pub ring_center: Option<Vec3>,
    /// Ring normal.
    #[arg(long = "ring-normal", value_name = "X,Y,Z", value_parser = parse_vec3, default_value = "0,0,1")]
    pub ring_normal: Vec3,
    #[arg(long = "ring-radius", value_name = "M")]
    pub ring_radius: Option<f64>,
    #[arg(long = "ring-count", default_value_t = 8)]
    pub ring_count: usize,
    /// Arc-length step, metres (default: bounding-box diagonal / 2000).
    #[arg(long, value_name = "M")]
    pub step: Option<f64>,
    #[arg(long = "max-steps", default_value_t = 100_000)]
    pub max_steps: usize,
    /// Half-width of the bounding cube about the source center, metres
    /// (default: 3 times the assembly half-extent; required for models).
    #[arg(long = "bounds-half", value_name = "M")]
    pub bounds_half: Option<f64>,
    #[arg(long, value_enum, default_value_t = DirectionArg::Forward)]
    pub direction: DirectionArg,
    /// Also write each line's x,y coordinates as a trace CSV.
    #[arg(long = "export-xy")]
    pub export_xy: bool,
    #[command(flatten)]
    pub out: OutArgs,
}

pub fn run_trace(a: &TraceArgs) -> CliResult {
    let source = a.source.require()?;
    let bounds = extent(&source);
    let (center, half) = match (a.bounds_half, &bounds) {
        (Some(h), _) => (bounds.as_ref().map(|b| b.0).unwrap_or_else(Vec3::zeros), h),
        (None, Some((c, half, _))) => (*c, 3.0 * half.max()),
        (None, None) => return Err(CliError::usage("--bounds-half is required for model sources")),
    };
    let mut cfg = IntegratorConfig::new(Aabb::cube(center, half)?);
    if let Some(step) = a.step {
        cfg.step = step;
        cfg.closure_eps = step;
    }
    cfg.max_steps = a.max_steps;
    cfg.direction = match a.direction {
        DirectionArg::Forward => Direction::Forward,
        DirectionArg::Backward => Direction::Backward,
        DirectionArg::Both => Direction::Both,
    };
    cfg.validate()?;

    let mut seeds = a.seed.clone();
    match (a.ring_center, a.ring_radius) {
        (Some(c), Some(r)) => seeds.extend(seed_ring(&c, &a.ring_normal, r, a.ring_count)?),
        (None, None) => {}
        _ => return Err(CliError::usage("a seed ring needs both --ring-center and --ring-radius")),
    }
    if seeds.is_empty() {
        return Err(CliError::usage("no seeds: pass --seed or --ring-center with --ring-radius"));
    }

    let lines = trace_set(&source, &seeds, &cfg);
    let out = a.out.open("streamlines")?;
    out.write(".csv", streamline_csv(&lines).as_bytes())?;
    out.write("_summary.csv", streamline_summary(&lines).as_bytes())?;
    if a.export_xy {
        for (id, line) in lines.iter().enumerate() {
            if let Ok(line) = line {
                let mut s = String::from("x,y\n");
                for p in &line.points {
                    s.push_str(&format!("{},{}\n", fmt_f64(p.x), fmt_f64(p.y)));
                }
                out.write(&format!("_line{id}_xy.csv"), s.as_bytes())?;
            }
        }
    }

    println!("step_m = {}", fmt_f64(cfg.step));
    println!("lines = {}", lines.len());
    let mut failures = Vec::new();
    for (id, line) in lines.iter().enumerate() {
        match line {
            Ok(l) => println!("line {id}: points = {}, termination = {}", l.points.len(), l.termination.name()),
            Err(e) => failures.push((CliError::from(e.clone()).code, format!("line {id}: {e}"))),
        }
    }
    match failures.iter().map(|f| f.0).max() {
        None => Ok(()),
        Some(code) => Err(CliError { code, message: failures.into_iter().map(|f| f.1).collect::<Vec<_>>().join("\n") }),
    }
}
