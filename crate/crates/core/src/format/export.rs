//! Text and image exports. Every function builds the file content in memory;
//! [`write_atomic`] puts it on disk.

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use super::fmt_f64;
use crate::analysis::{PolarTrace, SpiralFit, Trace};
use crate::error::UsageError;
use crate::field::FieldGrid;
use crate::sensor::{ParticleSpec, RelaxationReport, ResponseImage, SensorSpec};
use crate::sources::Assembly;
use crate::streamline::{Streamline, TraceError};

/// Writes `bytes` to a temporary file beside `path`, then renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// `key=value` lines in the given order.
pub fn key_values(pairs: &[(&str, String)]) -> String {
    let mut s = String::new();
    for (k, v) in pairs {
        let _ = writeln!(s, "{k}={v}");
    }
    s
}

fn row(cells: impl IntoIterator<Item = String>) -> String {
    let mut line = cells.into_iter().collect::<Vec<_>>().join(",");
    line.push('\n');
    line
}

pub fn dipole_csv(assembly: &Assembly) -> String {
    let mut s = String::from("x_m,y_m,z_m,mx_Am2,my_Am2,mz_Am2\n");
    for d in assembly.dipoles() {
        s.push_str(&row(d.position.iter().chain(d.moment.iter()).map(|v| fmt_f64(*v))));
    }
    s
}

const AXIS_NAMES: [&str; 3] = ["i", "j", "k"];

/// One row per node, axis-0 index fastest.
pub fn field_grid_csv(grid: &FieldGrid) -> String {
    let dims = grid.spec.counts.len();
    let mut s =
        row(AXIS_NAMES[..dims].iter().map(|n| n.to_string()).chain(["x_m", "y_m", "z_m", "value"].map(String::from)));
    for (n, v) in grid.values.iter().enumerate() {
        let idx = grid.spec.index(n);
        let p = grid.spec.node(&idx);
        s.push_str(&row(idx.iter().map(|i| i.to_string()).chain(p.iter().map(|c| fmt_f64(*c))).chain([fmt_f64(*v)])));
    }
    s
}

fn pgm(nx: usize, ny: usize, pixels: impl Fn(usize, usize) -> u8) -> Vec<u8> {
    let mut out = format!("P5\n{nx} {ny}\n255\n").into_bytes();
    out.reserve(nx * ny);
    // top image row is the last grid row
    for j in (0..ny).rev() {
        for i in 0..nx {
            out.push(pixels(i, j));
        }
    }
    out
}

fn quantize(v: f64, lo: f64, hi: f64) -> u8 {
    if !(hi > lo) || !v.is_finite() {
        return 0;
    }
    (255.0 * ((v - lo) / (hi - lo)).clamp(0.0, 1.0)).round() as u8
}

/// 8-bit binary PGM of a two-axis grid, scaled linearly from its minimum
/// (0) to its maximum (255). The first image row is the highest `j`.
pub fn field_grid_pgm(grid: &FieldGrid) -> Result<Vec<u8>, UsageError> {
    let [nx, ny] = grid.spec.counts[..] else {
        return Err(UsageError::new("PGM export needs a two-axis grid"));
    };
    let (lo, hi) = grid.min_max();
    Ok(pgm(nx, ny, |i, j| quantize(grid.values[i + nx * j], lo, hi)))
}

pub fn field_grid_sidecar(grid: &FieldGrid) -> String {
    let (lo, hi) = grid.min_max();
    let spec = &grid.spec;
    let mut pairs = vec![
        ("quantity", grid.quantity.name().to_string()),
        ("counts", spec.counts.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")),
        ("spacing_m", fmt_f64(spec.spacing)),
        ("origin_m", vec3(&spec.origin)),
    ];
    let axis_keys = ["axis_i", "axis_j", "axis_k"];
    for (k, a) in axis_keys.iter().zip(&spec.axes) {
        pairs.push((k, vec3(a)));
    }
    pairs.push(("min", fmt_f64(lo)));
    pairs.push(("max", fmt_f64(hi)));
    pairs.push(("pgm_scaling", "linear min->0 max->255, first row = highest j".into()));
    key_values(&pairs)
}

fn vec3(v: &crate::geometry::Vec3) -> String {
    v.iter().map(|c| fmt_f64(*c)).collect::<Vec<_>>().join(",")
}

/// Points of every successfully traced line; failed seeds keep their id
/// but contribute no rows.
pub fn streamline_csv(lines: &[Result<Streamline, TraceError>]) -> String {
    let mut s = String::from("line_id,point_index,x_m,y_m,z_m\n");
    for (id, line) in lines.iter().enumerate() {
        let Ok(line) = line else { continue };
        for (k, p) in line.points.iter().enumerate() {
            s.push_str(&row([id.to_string(), k.to_string()].into_iter().chain(p.iter().map(|c| fmt_f64(*c)))));
        }
    }
    s
}

pub fn streamline_summary(lines: &[Result<Streamline, TraceError>]) -> String {
    let mut s = String::from("line_id,points,termination,backward_termination,error\n");
    for (id, line) in lines.iter().enumerate() {
        let cells = match line {
            Ok(l) => [
                id.to_string(),
                l.points.len().to_string(),
                l.termination.name().to_string(),
                l.backward_termination.map_or(String::new(), |t| t.name().to_string()),
                String::new(),
            ],
            Err(e) => [id.to_string(), "0".into(), "error".into(), String::new(), e.to_string().replace(',', ";")],
        };
        s.push_str(&row(cells));
    }
    s
}

/// `(angle, magnitude)` PGMs. Angles map `[0, 2π)` onto 256 equal bins;
/// magnitudes map `[0, 1]` linearly onto `0..=255`.
pub fn response_pgms(img: &ResponseImage) -> (Vec<u8>, Vec<u8>) {
    let nx = img.nx;
    let angle = pgm(nx, img.ny, |i, j| ((img.angle[i + nx * j] / TAU * 256.0).floor() as i64).clamp(0, 255) as u8);
    let magnitude = pgm(nx, img.ny, |i, j| quantize(img.magnitude[i + nx * j], 0.0, 1.0));
    (angle, magnitude)
}

pub fn response_sidecar(img: &ResponseImage, sensor: &SensorSpec, particle: &ParticleSpec) -> String {
    key_values(&[
        ("nx", img.nx.to_string()),
        ("ny", img.ny.to_string()),
        ("mask_count", img.mask_count().to_string()),
        ("center_m", vec3(&sensor.center)),
        ("pixel_pitch_m", fmt_f64(sensor.pixel_pitch)),
        ("film_thickness_m", fmt_f64(sensor.film_thickness)),
        ("concentration", fmt_f64(sensor.concentration)),
        ("b_min_T", fmt_f64(sensor.b_min)),
        ("particle_radius_m", fmt_f64(particle.radius)),
        ("particle_moment_Am2", fmt_f64(particle.particle_moment)),
        ("temperature_K", fmt_f64(particle.temperature)),
        ("angle_scaling", "[0,2pi) -> 256 bins".into()),
        ("magnitude_scaling", "[0,1] -> 0..255".into()),
    ])
}

pub fn relaxation_report(report: &RelaxationReport, spec: &ParticleSpec, mechanisms: &str) -> String {
    key_values(&[
        ("mechanisms", mechanisms.to_string()),
        ("radius_m", fmt_f64(spec.radius)),
        ("coating_m", fmt_f64(spec.coating)),
        ("viscosity_Pa_s", fmt_f64(spec.viscosity)),
        ("temperature_K", fmt_f64(spec.temperature)),
        ("neel_tau0_s", fmt_f64(spec.neel_tau0)),
        ("anisotropy_J_m3", fmt_f64(spec.anisotropy)),
        ("V_B_m3", fmt_f64(report.v_b)),
        ("tau_B_s", fmt_f64(report.tau_b)),
        ("tau_N_s", fmt_f64(report.tau_n)),
        ("neel_blocked", report.neel_blocked.to_string()),
        ("tau_eff_s", fmt_f64(report.tau_eff)),
        ("delta_Hz", fmt_f64(report.delta)),
        ("observation_time_s", fmt_f64(report.observation_time)),
        ("regime", report.regime.name().to_string()),
    ])
}

pub fn fit_report(fit: &SpiralFit, polar: &PolarTrace, growth_residual: f64, unit: &str) -> String {
    key_values(&[
        ("unit", unit.to_string()),
        ("origin", format!("{},{}", fmt_f64(polar.origin[0]), fmt_f64(polar.origin[1]))),
        ("a", fmt_f64(fit.a)),
        ("b", fmt_f64(fit.b)),
        ("r_squared", fmt_f64(fit.r_squared)),
        ("rms_residual_ln_r", fmt_f64(fit.rms_residual)),
        ("n_points", fit.n_points.to_string()),
        ("dropped_samples", polar.dropped.to_string()),
        ("radius_growth_residual", fmt_f64(growth_residual)),
    ])
}

pub fn spiral_plot_csv(rows: &[[f64; 4]]) -> String {
    let mut s = String::from("theta,r,ln_r,fit_ln_r\n");
    for r in rows {
        s.push_str(&row(r.iter().map(|v| fmt_f64(*v))));
    }
    s
}

/// Trace coordinates relative to `origin` with their base-10 logarithms,
/// the data behind a log-scale xy plot. Points on either axis are skipped.
pub fn loglog_csv(trace: &Trace, origin: [f64; 2]) -> String {
    let mut s = String::from("x,y,log10_abs_x,log10_abs_y\n");
    for p in trace.points() {
        let (x, y) = (p[0] - origin[0], p[1] - origin[1]);
        if x == 0.0 || y == 0.0 {
            continue;
        }
        s.push_str(&row([x, y, x.abs().log10(), y.abs().log10()].map(fmt_f64)));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{surface_map, GridSpec, ModelField, Quantity};
    use crate::geometry::Vec3;

    #[test]
    fn pgm_header_and_scaling() {
        let src = ModelField::PointDipole { moment: Vec3::z(), position: Vec3::new(0.0, 0.0, -0.1) };
        let spec = GridSpec::horizontal(0.0, 0.0, 0.0, 0.05, 5, 4).unwrap();
        let grid = surface_map(&src, &spec, Quantity::Magnitude).unwrap();
        let img = field_grid_pgm(&grid).unwrap();
        let header = b"P5\n5 4\n255\n";
        assert_eq!(&img[..header.len()], header);
        let body = &img[header.len()..];
        assert_eq!(body.len(), 20);
        assert_eq!(*body.iter().max().unwrap(), 255);
        assert_eq!(*body.iter().min().unwrap(), 0);
        let csv = field_grid_csv(&grid);
        assert!(csv.starts_with("i,j,x_m,y_m,z_m,value\n"));
        assert_eq!(csv.lines().count(), 21);
    }

    #[test]
    fn atomic_write_replaces_content() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.txt");
        write_atomic(&p, b"first").unwrap();
        write_atomic(&p, b"second").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"second");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn angle_bins_cover_full_turn() {
        let img = ResponseImage {
            nx: 2,
            ny: 1,
            angle: vec![0.0, TAU - 1e-12],
            magnitude: vec![0.0, 1.0],
            masked: vec![false, false],
        };
        let (a, m) = response_pgms(&img);
        assert_eq!(&a[a.len() - 2..], &[0, 255]);
        assert_eq!(&m[m.len() - 2..], &[0, 255]);
    }
}
