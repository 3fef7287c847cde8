//! `fluxforge`: build magnet assemblies, map their fields, trace field lines,
//! model the viewer film and run the spiral and conservativity analyses.
//!
//! Exit codes: 0 on success, 1 on a numeric or domain failure, 2 on a usage
//! or configuration error.

mod analyze;
mod assembly;
mod common;
mod config;
mod error;
mod field;
mod sensor;
mod streamline;

use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand};

use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "fluxforge", version, about = "Magnetostatic assemblies, field maps and field-line analysis")]
struct Cli {
    /// INI file whose `[group command]` keys set long options; flags on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<std::path::PathBuf>,
    #[command(subcommand)]
    group: Group,
}

#[derive(Debug, Subcommand)]
enum Group {
    /// Build preset assemblies.
    Assembly {
        #[command(subcommand)]
        cmd: AssemblyCmd,
    },
    /// Evaluate fields at points or over planes.
    Field {
        #[command(subcommand)]
        cmd: FieldCmd,
    },
    /// Trace field lines.
    Streamline {
        #[command(subcommand)]
        cmd: StreamlineCmd,
    },
    /// Particle relaxation, film rendering and temporal filtering.
    Sensor {
        #[command(subcommand)]
        cmd: SensorCmd,
    },
    /// Spiral fitting and conservativity checks.
    Analyze {
        #[command(subcommand)]
        cmd: AnalyzeCmd,
    },
}

#[derive(Debug, Subcommand)]
enum AssemblyCmd {
    /// Write a preset's description file and dipole CSV.
    Build(assembly::BuildArgs),
}

#[derive(Debug, Subcommand)]
enum FieldCmd {
    /// Print B at the given points.
    Sample(field::SampleArgs),
    /// Sample a plane and write CSV, PGM and sidecar.
    Map(field::MapArgs),
}

#[derive(Debug, Subcommand)]
enum StreamlineCmd {
    /// Trace field lines from seeds.
    Trace(streamline::TraceArgs),
}

#[derive(Debug, Subcommand)]
enum SensorCmd {
    /// Relaxation times, decoherence rate and regime of a particle.
    Relax(sensor::RelaxArgs),
    /// Film response images for a field source.
    Render(sensor::RenderArgs),
    /// First-order low-pass of a sampled series.
    Filter(sensor::FilterArgs),
}

#[derive(Debug, Subcommand)]
enum AnalyzeCmd {
    /// Fit a logarithmic spiral to a digitized trace.
    FitSpiral(analyze::FitArgs),
    /// Divergence, curl, loop-work, curl-force and potential checks.
    Conserve(analyze::ConserveArgs),
}

fn dispatch(cli: &Cli) -> CliResult {
    match &cli.group {
        Group::Assembly { cmd: AssemblyCmd::Build(a) } => assembly::run_build(a),
        Group::Field { cmd: FieldCmd::Sample(a) } => field::run_sample(a),
        Group::Field { cmd: FieldCmd::Map(a) } => field::run_map(a),
        Group::Streamline { cmd: StreamlineCmd::Trace(a) } => streamline::run_trace(a),
        Group::Sensor { cmd: SensorCmd::Relax(a) } => sensor::run_relax(a),
        Group::Sensor { cmd: SensorCmd::Render(a) } => sensor::run_render(a),
        Group::Sensor { cmd: SensorCmd::Filter(a) } => sensor::run_filter(a),
        Group::Analyze { cmd: AnalyzeCmd::FitSpiral(a) } => analyze::run_fit(a),
        Group::Analyze { cmd: AnalyzeCmd::Conserve(a) } => analyze::run_conserve(a),
    }
}

fn run() -> CliResult {
    let argv: Vec<String> = std::env::args().collect();
    let argv = config::apply(argv, &Cli::command())?;
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return if code == 0 { Ok(()) } else { Err(CliError { code, message: String::new() }) };
        }
    };
    dispatch(&cli)
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !e.message.is_empty() {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.code)
        }
    }
}
