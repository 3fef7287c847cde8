use std::path::{Path, PathBuf};

use clap::Args;
use fluxforge_core::format::{fmt_f64, parse_description, parse_model_spec, write_atomic, Source};
use fluxforge_core::sensor::{ParticleSpec, DEFAULT_ANISOTROPY, DEFAULT_TAU0, ROOM_TEMPERATURE};
use fluxforge_core::{ModelField, Vec3};

use crate::error::{CliError, CliResult};

/// Output directory used when neither `--out-dir` nor `FLUXFORGE_OUT` is set.
pub const DEFAULT_OUT_DIR: &str = "fluxforge-out";
pub const OUT_ENV: &str = "FLUXFORGE_OUT";

pub fn parse_vec3(s: &str) -> Result<Vec3, String> {
    let v = parse_list(s)?;
    match v[..] {
        [x, y, z] => Ok(Vec3::new(x, y, z)),
        _ => Err(format!("expected x,y,z, got `{s}`")),
    }
}

pub fn parse_pair(s: &str) -> Result<[f64; 2], String> {
    let v = parse_list(s)?;
    match v[..] {
        [x, y] => Ok([x, y]),
        _ => Err(format!("expected x,y, got `{s}`")),
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| format!("`{t}` is not a finite number"))
        })
        .collect()
}

pub fn vec3_text(v: &Vec3) -> String {
    v.iter().map(|c| fmt_f64(*c)).collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// Assembly description file.
    #[arg(long, value_name = "FILE")]
    pub assembly: Option<PathBuf>,
    /// Closed-form model instead of an assembly, e.g. "spiral pitch=0.2 core_radius_mm=1".
    #[arg(long, value_name = "SPEC", conflicts_with = "assembly")]
    pub model: Option<String>,
}

impl SourceArgs {
    pub fn load(&self) -> CliResult<Option<Source>> {
        if let Some(path) = &self.assembly {
            return load_description(path).map(Some);
        }
        if let Some(spec) = &self.model {
            return Ok(Some(Source::Model(parse_model_spec(spec)?)));
        }
        Ok(None)
    }

    pub fn require(&self) -> CliResult<Source> {
        self.load()?.ok_or_else(|| CliError::usage("a field source is required: pass --assembly FILE or --model SPEC"))
    }

    /// The source, or the zero field when none was given.
    pub fn or_zero(&self) -> CliResult<Source> {
        Ok(self.load()?.unwrap_or(Source::Model(ModelField::zero())))
    }
}

pub fn load_description(path: &Path) -> CliResult<Source> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read assembly file {}: {e}", path.display())))?;
    let desc =
        parse_description(&text).map_err(|e| CliError::usage(format!("assembly file {}: {e}", path.display())))?;
    Ok(desc.build()?)
}

/// Center and size of a source: the assembly bounds, or `None` for models.
pub fn extent(source: &Source) -> Option<(Vec3, Vec3, f64)> {
    match source {
        Source::Assembly(a) => {
            let (lo, hi) = a.bounds();
            Some((a.center(), (hi - lo) * 0.5, a.diameter()))
        }
        Source::Model(_) => None,
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutArgs {
    /// Output directory (overrides FLUXFORGE_OUT; default fluxforge-out).
    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
    /// File name stem for the outputs.
    #[arg(long, value_name = "STEM")]
    pub name: Option<String>,
}

pub struct Output {
    dir: PathBuf,
    stem: String,
}

impl OutArgs {
    pub fn open(&self, default_stem: &str) -> CliResult<Output> {
        let dir = self
            .out_dir
            .clone()
            .or_else(|| std::env::var_os(OUT_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
        std::fs::create_dir_all(&dir)
            .map_err(|e| CliError::usage(format!("cannot create output directory {}: {e}", dir.display())))?;
        let stem = self.name.clone().unwrap_or_else(|| default_stem.to_string());
        if stem.is_empty() || stem.contains(['/', '\\']) {
            return Err(CliError::usage(format!("invalid output name `{stem}`")));
        }
        Ok(Output { dir, stem })
    }
}

impl Output {
    /// Writes `<stem><suffix>` atomically and reports the path.
    pub fn write(&self, suffix: &str, bytes: &[u8]) -> CliResult<PathBuf> {
        let path = self.dir.join(format!("{}{suffix}", self.stem));
        write_atomic(&path, bytes).map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))?;
        println!("wrote {}", path.display());
        Ok(path)
    }
}

#[derive(Debug, Clone, Args)]
pub struct ParticleArgs {
    /// Core radius in micrometres.
    #[arg(long = "radius-um", value_name = "UM", conflicts_with = "radius_nm")]
    pub radius_um: Option<f64>,
    /// Core radius in nanometres (default 5, the standard viewer-film particle).
    #[arg(long = "radius-nm", value_name = "NM")]
    pub radius_nm: Option<f64>,
    /// Surfactant coating thickness in nanometres.
    #[arg(long = "coating-nm", value_name = "NM", default_value_t = 0.0)]
    pub coating_nm: f64,
    /// Carrier viscosity in centipoise.
    #[arg(long = "eta-cP", value_name = "CP", default_value_t = 2.4)]
    pub eta_cp: f64,
    /// Temperature in kelvin.
    #[arg(long = "temp-K", value_name = "K", default_value_t = ROOM_TEMPERATURE)]
    pub temp_k: f64,
    /// Néel attempt time in seconds.
    #[arg(long = "tau0-s", value_name = "S", default_value_t = DEFAULT_TAU0)]
    pub tau0_s: f64,
    /// Effective anisotropy constant in J/m³.
    #[arg(long = "anisotropy-J-m3", value_name = "K", default_value_t = DEFAULT_ANISOTROPY)]
    pub anisotropy: f64,
    /// Particle moment in A·m² (default: magnetite saturation times core volume).
    #[arg(long = "moment-Am2", value_name = "M")]
    pub moment: Option<f64>,
}

impl ParticleArgs {
    pub fn spec(&self) -> CliResult<ParticleSpec> {
        let radius = match (self.radius_um, self.radius_nm) {
            (Some(um), _) => um * 1e-6,
            (_, Some(nm)) => nm * 1e-9,
            _ => ParticleSpec::ferrolens_default().radius,
        };
        let mut spec = ParticleSpec::magnetite(radius);
        spec.coating = self.coating_nm * 1e-9;
        spec.viscosity = self.eta_cp * 1e-3;
        spec.temperature = self.temp_k;
        spec.neel_tau0 = self.tau0_s;
        spec.anisotropy = self.anisotropy;
        if let Some(m) = self.moment {
            spec.particle_moment = m;
        }
        spec.validate()?;
        Ok(spec)
    }
}
